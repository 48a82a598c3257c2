#include "hleray/radial.hpp"

#include "hleray/error.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

namespace hleray {


void RadialGrid::validate() const {
  if (!(t_min < t_max) || !std::isfinite(t_min) || !std::isfinite(t_max)) {
    throw DomainError("radial grid needs finite t_min < t_max");
  }
  if (M < 16 || M % 2 != 0) {
    throw DomainError("radial grid needs an even M >= 16, got " + std::to_string(M));
  }
}

Eigen::VectorXd RadialGrid::nodes() const {
  Eigen::VectorXd t(M);
  for (int j = 0; j < M; ++j) t[j] = this->t(j);
  return t;
}

RadialProfile::RadialProfile(const RadialGrid& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (values.size() != g.M) {
    throw DomainError("profile length does not match grid");
  }
}

RadialProfile RadialProfile::sample(const RadialGrid& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.M);
  for (int j = 0; j < g.M; ++j) v[j] = f(g.t(j));
  return RadialProfile(g, std::move(v));
}

double bump(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_derivative(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? -2.0 * s / (q * q) * std::exp(-1.0 / q) : 0.0;
}

RadialProfile bump_profile(const RadialGrid& g, double center, double half_width) {
  if (!(half_width > 0.0)) {
    throw DomainError("bump half-width must be positive");
  }
  return RadialProfile::sample(g, [&](double t) { return bump((t - center) / half_width); });
}

void check_support(const RadialGrid& g, const Eigen::Ref<const Eigen::MatrixXd>& columns,
                   const char* what) {
  const double peak = columns.cwiseAbs().maxCoeff();
  if (!(std::isfinite(peak))) {
    throw FieldError(std::string(what) + ": non-finite samples");
  }
  if (peak == 0.0) return;
  const int edge = static_cast<int>(std::ceil(kSupportMargin * g.M));
  const double tail = std::max(columns.topRows(edge).cwiseAbs().maxCoeff(),
                               columns.bottomRows(edge).cwiseAbs().maxCoeff());
  if (tail > kSupportTolerance * peak) {
    std::ostringstream msg;
    msg << what << ": data does not vanish on the outer 10% of the radial grid (relative tail "
        << std::scientific << std::setprecision(3) << tail / peak << ")";
    throw SupportError(msg.str());
  }
}

const std::vector<double>& derivative_stencil() {
  // w_k = (-1)^{k+1} (m!)^2 / (k (m-k)! (m+k)!), the central weights of order 2m.
  static const std::vector<double> w = [] {
    std::vector<double> out(kStencilHalfWidth + 1, 0.0);
    const int m = kStencilHalfWidth;
    for (int k = 1; k <= m; ++k) {
      double r = 1.0;  // (m!)^2 / ((m-k)! (m+k)!) = prod_{i=1..k} (m-k+i) / (m+i)
      for (int i = 1; i <= k; ++i) r *= static_cast<double>(m - k + i) / (m + i);
      out[k] = (k % 2 == 1 ? 1.0 : -1.0) * r / k;
    }
    return out;
  }();
  return w;
}

Eigen::MatrixXd radial_dt(const RadialGrid& g, const Eigen::Ref<const Eigen::MatrixXd>& columns) {
  const int M = g.M;
  if (columns.rows() != M) {
    throw DomainError("radial_dt: row count does not match grid");
  }
  const std::vector<double>& w = derivative_stencil();
  const double inv_h = 1.0 / g.h();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M, columns.cols());
  for (int k = 1; k <= kStencilHalfWidth; ++k) {
    const double c = w[k] * inv_h;
    // out_j += c (f_{j+k} - f_{j-k}), periodic.
    out.topRows(M - k) += c * columns.bottomRows(M - k);
    out.bottomRows(k) += c * columns.topRows(k);
    out.bottomRows(M - k) -= c * columns.topRows(M - k);
    out.topRows(k) -= c * columns.bottomRows(k);
  }
  return out;
}

double integrate(const RadialGrid& g, const Eigen::Ref<const Eigen::VectorXd>& v) {
  return g.h() * v.sum();
}

} // namespace hleray
