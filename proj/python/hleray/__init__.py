"""Sharp Hardy-Leray constants for solenoidal fields.

Thin layer over the compiled ``_core`` module; report-style calls return
plain dicts.
"""

import json as _json

from ._core import (
    DomainError,
    Error,
    FieldError,
    FormatError,
    OverflowError,
    RegimeError,
    SupportError,
    TruncationError,
    Field,
    bump_energy_ratio,
    c_pol,
    c_solenoidal,
    c_tor,
    cm_orig,
    extremal,
    interval,
    load_field,
    mode_quotient,
    pt_split,
    random_solenoidal,
    toroidal_generator,
)

__version__ = "0.1.0"


def _number(x):
    # Non-finite values travel as strings in the JSON reports.
    return float(x) if isinstance(x, str) else x


def constants(N, gamma):
    """Closed-form constants at (N, gamma) as a dict."""
    from ._core import constant_report_json

    report = _json.loads(constant_report_json(N, gamma))
    report["interval"] = tuple(_number(x) for x in report["interval"])
    return report


def verify(suites=(), Ns=(), gammas=(), fields=20, seed=1, perturb=0.0):
    """Run verification suites; returns the summary dict with a top-level "passed"."""
    from ._core import verify_json

    return _json.loads(verify_json(list(suites), list(Ns), list(gammas), fields, seed, perturb))
