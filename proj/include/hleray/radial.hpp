#pragma once

// Uniform grids in t = log r, compactly supported profiles, and
// differentiation in t.

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace hleray {

/// Periodic uniform grid t_j = t_min + j h, j = 0..M-1, h = (t_max - t_min) / M.
struct RadialGrid {
  double t_min = -8.0;
  double t_max = 8.0;
  int M = 1024;

  void validate() const;
  double h() const { return (t_max - t_min) / M; }
  double t(int j) const { return t_min + j * h(); }
  Eigen::VectorXd nodes() const;

  bool operator==(const RadialGrid&) const = default;
};

/// Samples of a real function of t on a RadialGrid.
struct RadialProfile {
  RadialGrid grid;
  Eigen::VectorXd values;

  RadialProfile() = default;
  RadialProfile(const RadialGrid& g, Eigen::VectorXd v);
  static RadialProfile sample(const RadialGrid& g, const std::function<double(double)>& f);
};

/// zeta(s) = exp(-1/(1-s^2)) on |s| < 1, zero elsewhere.
double bump(double s);
/// zeta'(s).
double bump_derivative(double s);

/// bump((t - center) / half_width) sampled on the grid.
RadialProfile bump_profile(const RadialGrid& g, double center, double half_width);

/// Fraction of the grid at each end on which compactly supported data must vanish.
inline constexpr double kSupportMargin = 0.1;

/// Relative size below which samples count as zero in the support check.
inline constexpr double kSupportTolerance = 1e-12;

/// Throws SupportError if some column exceeds kSupportTolerance times the
/// global maximum on the outer kSupportMargin of the grid at either end.
void check_support(const RadialGrid& g, const Eigen::Ref<const Eigen::MatrixXd>& columns,
                   const char* what);

/// Half-width of the central difference stencil used for d/dt (order 2m).
inline constexpr int kStencilHalfWidth = 8;

/// Stencil weights indexed by k = 1..m (entry 0 unused):
/// f'(t_j) ~ sum_k w_k (f_{j+k} - f_{j-k}) / h.
const std::vector<double>& derivative_stencil();

/// Column-wise d/dt on the periodic grid by the order-16 central difference.
/// The stencil is local, so data that vanish identically away from a compact
/// set keep an exactly vanishing derivative there; a global spectral
/// derivative would spread ripple over the whole grid, which exponential
/// weights |x|^{2 gamma} then amplify. The operator is antisymmetric, so
/// sum_j f_j (D f)_j = 0 exactly.
Eigen::MatrixXd radial_dt(const RadialGrid& g, const Eigen::Ref<const Eigen::MatrixXd>& columns);

/// Trapezoid (equivalently rectangle, by periodicity) rule sum h * sum_j v_j.
double integrate(const RadialGrid& g, const Eigen::Ref<const Eigen::VectorXd>& v);

} // namespace hleray
