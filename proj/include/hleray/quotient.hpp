#pragma once

// Spectral reduction of the Hardy-Leray quotient: Brezis-Vazquez transform,
// Fourier transform in t = log r, the Q0/Q1 polynomials, remainder terms and
// the extremal sequences.

#include "hleray/constants.hpp"
#include "hleray/fields.hpp"
#include "hleray/pt.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace hleray {

/// f = exp((gamma + (N-2)/2) t) g. Throws OverflowError if the exponent
/// exceeds 700 where g is nonzero.
RadialProfile bv_transform(const RadialProfile& g, const Params& p);
RadialProfile bv_inverse(const RadialProfile& f, const Params& p);

/// amplitude_k = h / sqrt(2 pi) sum_j f_j exp(-i tau_k t_j), tau_k = 2 pi k / (M h)
/// with k in [-M/2, M/2). Discrete Parseval: sum |amp|^2 dtau = h sum |f|^2.
struct Spectrum {
  Eigen::VectorXd tau;
  Eigen::VectorXcd amplitude;
  double dtau = 0.0;
};

Spectrum fet(const RadialProfile& f);

/// Q0(tau, a) = tau + a + (gamma - N/2)^2.
double q0(double tau, double a, const Params& p);
/// Q1(tau, a) = (tau + a - N + 3 + (gamma + (N-2)/2)^2) Q0(tau, a) + 4 (gamma - 1) a.
double q1(double tau, double a, const Params& p);
/// Q1 expanded as a quadratic in tau.
double q1_expanded(double tau, double a, const Params& p);

/// min over tau >= 0 of Q1/Q0 at fixed a, with its minimiser.
struct ModeBound {
  double value = 0.0;
  double tau_star = 0.0;
};

ModeBound mode_bound(double a, const Params& p);

struct QuotientReport {
  int N = 0;
  double gamma = 0.0;
  int nu = 0;
  int n = 0;                  ///< dilation index for sequence entries, 0 otherwise
  double spectral_value = 0.0;
  double direct_value = 0.0;
  double bound = 0.0;
  double gap = 0.0;           ///< spectral_value - bound
};

/// sum Q1(tau^2, alpha_nu) |f^|^2 / sum Q0(tau^2, alpha_nu) |f^|^2.
double spectral_quotient(int nu, const RadialProfile& f, const Params& p);

/// Compares the spectral quotient of f = bv_transform(exp(q t) g) with the
/// weighted-integral quotient of apply_D(exp(q t) g Y), Y the first basis
/// harmonic of degree nu. `disc` defaults to a basis of degree nu + 1 on g's grid.
QuotientReport mode_quotient(int nu, const RadialProfile& g, const Params& p, DiscPtr disc = nullptr,
                             double radial_power = 0.0);

/// R[u] = int |x . grad(|x|^{gamma+(N-2)/2} u)|^2 |x|^{-N} dx.
double remainder(const AmbientField& u, const Params& p);

struct ToroidalQuotient {
  double value = 0.0;
  double dirichlet = 0.0;
  double hardy = 0.0;
  double remainder = 0.0;
  double residual = 0.0;  ///< |dirichlet - c_tor hardy - R| / dirichlet
};

/// Throws FieldError for non-toroidal input.
ToroidalQuotient toroidal_quotient(const AmbientField& u, const Params& p);

enum class StrengthenedBranch { Outside, Inside };

struct StrengthenedReport {
  StrengthenedBranch branch = StrengthenedBranch::Outside;
  bool regime_mismatch = false;  ///< requested branch differs from the one gamma selects
  double dirichlet = 0.0;
  double hardy = 0.0;
  double constant = 0.0;         ///< c_solenoidal
  double correction = 0.0;       ///< correction_c (outside) or 1 (inside, weight of R[u_T])
  double remainder = 0.0;        ///< R[u] (outside) or R[u_T] (inside)
  double penalty = 0.0;          ///< (c_pol - c_tor) hardy(u_P), inside only
  double margin = 0.0;
  bool ok = false;               ///< margin >= -1e-8 dirichlet and no mismatch
};

/// Outside I_N: margin = D - C H - c R[u]. Inside: margin = D - C H -
/// (C_pol - C_tor) H(u_P) - R[u_T]. A `requested` branch that disagrees with
/// gamma is reported through regime_mismatch, and the branch gamma selects is
/// still evaluated.
StrengthenedReport strengthened_check(const AmbientField& u, const Params& p,
                                      std::optional<StrengthenedBranch> requested = std::nullopt,
                                      const PTSplit* split = nullptr);

/// int zeta'^2 / int zeta^2 for the standard bump.
double bump_energy_ratio();

struct ExtremalOptions {
  int M = 1024;
  double extent = 1.3;  ///< grid t in [-extent n, extent n]
};

struct ExtremalEntry {
  int n = 0;
  double quotient = 0.0;     ///< weighted-integral quotient of the field
  double spectral = 0.0;     ///< spectral quotient (poloidal) or c_tor + R/hardy (toroidal)
  double limit = 0.0;
  double gap = 0.0;          ///< quotient - limit
  double gap_n2 = 0.0;       ///< gap * n^2
};

/// u = D(|x|^{-c} zeta(t/n) Y_1): requires tau_min at 0 (RegimeError otherwise).
ExtremalEntry extremal_poloidal(int n, const Params& p, const ExtremalOptions& opts = {});
/// u = |x|^{-c} zeta(t/n) v^{(1,2)}.
ExtremalEntry extremal_toroidal(int n, const Params& p, const ExtremalOptions& opts = {});

struct ExtremalSequence {
  std::string kind;
  Params params;
  std::vector<ExtremalEntry> entries;
  double limit = 0.0;
  double slope = 0.0;  ///< least-squares slope of log gap against log n
  /// Richardson estimate from the last two entries assuming a gap ~ n^-2.
  double extrapolated_limit = 0.0;
};

/// kind is "poloidal" or "toroidal".
ExtremalSequence extremal_sequence(const std::string& kind, const std::vector<int>& ns, const Params& p,
                                   const ExtremalOptions& opts = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace hleray
