#pragma once

// Closed-form Hardy-Leray constants for solenoidal fields on R^N.
//
// Notation used throughout the library:
//   c = gamma + (N-2)/2   (the classical exponent, classical constant c^2)
//   l = gamma - N/2
//   A = 4 (N-1)(gamma-1), B = l^2 + N - 1

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hleray {

/// Problem instance: dimension and weight exponent.
struct Params {
  int N = 3;
  double gamma = 0.0;

  /// Throws DomainError unless N >= min_N and gamma is finite.
  void validate(int min_N = 2) const;

  double classical_exponent() const { return gamma + 0.5 * (N - 2); }
  double shifted() const { return gamma - 0.5 * N; }
};

/// Minimiser of g(tau) = tau + A/(tau + B) over tau >= 0.
struct TauMinResult {
  double tau_star = 0.0;
  double value = 0.0;
  double a_param = 0.0;
  double b_param = 0.0;
};

/// The open gamma-interval on which the toroidal branch is the smaller one.
///
/// For N >= 3 this is (lower, upper) with upper = +inf when N = 3. For N = 2
/// the endpoint formulas give lower > upper and the toroidal set is the
/// complement of [upper, lower]; `wraps` is set in that case.
struct GammaInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool wraps = false;

  bool contains(double gamma) const;
};

/// Eigenvalue nu (nu + N - 2) of -Laplace-Beltrami on S^{N-1}.
double alpha(int nu, int N);

TauMinResult tau_min(const Params& p);

/// Endpoints of I_N. Requires N >= 3.
GammaInterval interval_IN(int N);

/// Same formulas, admitting N = 2 (wrapped interval).
GammaInterval gamma_interval(int N);

bool in_interval(const Params& p);

double classical_constant(const Params& p);
double c_pol(const Params& p);
double c_tor(const Params& p);
double c_axis(const Params& p);
/// The min{N-1, 2 + min_tau ...} form.
double cm_orig(const Params& p);
/// The piecewise closed form; at the interval endpoints the non-interval
/// branch is evaluated.
double c_solenoidal(const Params& p);

/// B(lambda) = lambda^4 + (N-1)(2 lambda^2 - 4 lambda - N + 3).
double quartic_B(double lambda, int N);
/// G(tau) = 1 - A / ((tau + B)(B)).
double g_of_tau(double tau, const Params& p);
/// G(0) evaluated directly.
double g_zero(const Params& p);
/// G(0) evaluated as quartic_B(l) / B^2.
double g_zero_quartic(const Params& p);
/// c_{N,gamma} = min(1, G(0)), clamped below at 0.
double correction_c(const Params& p);

struct ConstantReport {
  int N = 0;
  double gamma = 0.0;
  double classical = 0.0;
  double c_pol = 0.0;
  double c_tor = 0.0;
  double c_axis = 0.0;
  double c_solenoidal = 0.0;
  double cm_orig = 0.0;
  bool in_interval = false;
  GammaInterval interval;
  double tau_star = 0.0;
  double correction_c = 0.0;
  double g_zero = 0.0;
  double quartic_b = 0.0;
};

ConstantReport constant_report(const Params& p);

/// One point of an identity sweep.
struct IdentityPoint {
  int N = 0;
  double gamma = 0.0;
  double discrepancy = 0.0;       ///< |cm_orig - c_solenoidal|
  bool in_interval = false;
  bool branch_order_ok = true;         ///< c_pol > c_tor inside, c_tor >= c_pol = closed form outside
  bool quartic_nonpositive = false;   ///< quartic_B(l) <= 0
  bool quartic_implication_ok = true;         ///< c_tor + 2 <= c_pol whenever it applies
  bool correction_positive = true;///< G(0) > 0 and correction_c > 0 outside I_N
  bool within_tolerance = true;
};

struct IdentityReport {
  double max_discrepancy = 0.0;
  int argmax_N = 0;
  double argmax_gamma = 0.0;
  std::size_t violations = 0;     ///< points failing any check
  std::vector<IdentityPoint> points;
};

/// Evaluates both constant expressions and the branch checks on the grid
/// N in Ns, gamma = gamma_min + i * step <= gamma_max. Violations are
/// counted, never thrown. `perturb` is added to c_solenoidal (test hook).
IdentityReport verify_identity(std::span<const int> Ns, double gamma_min, double gamma_max,
                               double step, double tolerance = 1e-12, double perturb = 0.0);

/// Sign changes of c_pol - c_tor on [lo, hi], refined by bracketing root
/// finding to |error| <= 1e-13.
std::vector<double> branch_crossings(int N, double lo, double hi, double scan_step = 0.01);

} // namespace hleray
