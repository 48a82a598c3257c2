import math

import numpy as np
import pytest

import hleray


def test_constants():
    r = hleray.constants(3, 0.0)
    assert r["c_solenoidal"] == pytest.approx(25 / 68, rel=1e-14)
    assert r["c_tor"] == 2.25
    assert r["interval"][0] == pytest.approx(1.0)
    assert math.isinf(r["interval"][1])
    assert hleray.c_solenoidal(3, 2.0) == 8.25
    assert abs(hleray.cm_orig(5, 0.3) - hleray.c_solenoidal(5, 0.3)) < 1e-12


def test_domain_error():
    with pytest.raises(hleray.DomainError):
        hleray.constants(1, 0.0)


def test_pt_split_round_trip(tmp_path):
    u = hleray.random_solenoidal(3, seed=4, L=3, basis_degree=4, M=512)
    assert u.checks()["solenoidal"]
    up, ut = hleray.pt_split(u)
    assert ut.checks()["toroidal"]
    rest = u - up - ut
    assert rest.hardy(0.0) <= 1e-20 * u.hardy(0.0)
    path = tmp_path / "u.field"
    u.save(str(path))
    v = hleray.load_field(str(path))
    assert v.N == 3 and v.M == 512
    for k in range(3):
        assert np.abs(v.component(k) - u.component(k)).max() <= 1e-12 * np.abs(u.component(k)).max()


def test_toroidal_generator_and_regime():
    u = hleray.toroidal_generator(3)
    assert u.checks()["toroidal"]
    with pytest.raises(hleray.RegimeError):
        hleray.extremal("poloidal", [8, 16], 4, 3.0)


def test_quotients():
    q = hleray.mode_quotient(1, 3, 0.5)
    assert q["gap"] >= -1e-9
    assert q["spectral_value"] == pytest.approx(q["direct_value"], rel=1e-5)
    s = hleray.extremal("toroidal", [8, 16, 32], 3, 0.0)
    assert s["slope"] == pytest.approx(-2.0, abs=0.05)
    for e in s["entries"]:
        assert e["gap_n2"] == pytest.approx(hleray.bump_energy_ratio(), rel=1e-4)


def test_verify():
    summary = hleray.verify(["identity", "interval"])
    assert summary["passed"]
    bad = hleray.verify(["identity"], perturb=1e-6)
    assert not bad["passed"]
