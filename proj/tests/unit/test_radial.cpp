#include "hleray/error.hpp"
#include "hleray/radial.hpp"

#include <doctest.h>

#include <cmath>

using namespace hleray;

TEST_CASE("stencil weights reproduce the derivative of polynomials") {
  const auto& w = derivative_stencil();
  REQUIRE(static_cast<int>(w.size()) == kStencilHalfWidth + 1);
  // sum_k w_k (k^p - (-k)^p) = [p == 1] for odd p < 2m + 1.
  for (int p = 1; p < 2 * kStencilHalfWidth; p += 2) {
    double s = 0.0, scale = 0.0;
    for (int k = 1; k <= kStencilHalfWidth; ++k) {
      s += w[k] * 2.0 * std::pow(k, p);
      scale += std::abs(w[k]) * 2.0 * std::pow(k, p);
    }
    CHECK(std::abs(s - (p == 1 ? 1.0 : 0.0)) <= 1e-14 * scale);
  }
}

TEST_CASE("radial derivative of a bump") {
  const RadialGrid g;
  const double c = 0.3, hw = 3.0;
  const RadialProfile f = bump_profile(g, c, hw);
  const Eigen::MatrixXd d = radial_dt(g, f.values);
  double worst = 0.0;
  for (int j = 0; j < g.M; ++j) {
    const double exact = bump_derivative((g.t(j) - c) / hw) / hw;
    worst = std::max(worst, std::abs(d(j, 0) - exact));
  }
  const double scale = 1.0 / hw;
  CHECK(worst / scale < 1e-6);
  // Antisymmetry: sum f Df = 0.
  CHECK(std::abs(f.values.dot(d.col(0))) < 1e-14);
}

TEST_CASE("integration and support") {
  const RadialGrid g;
  // int zeta = 0.443993816168079 (tabulated value of the standard bump integral).
  const RadialProfile f = bump_profile(g, 0.0, 1.0);
  CHECK(integrate(g, f.values) == doctest::Approx(0.443993816168079).epsilon(1e-9));
  check_support(g, f.values, "bump");
  const RadialProfile wide = bump_profile(g, 0.0, 7.9);
  CHECK_THROWS_AS(check_support(g, wide.values, "wide bump"), SupportError);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((RadialGrid{1.0, 0.0, 64}.validate()), DomainError);
  CHECK_THROWS_AS((RadialGrid{-1.0, 1.0, 3}.validate()), DomainError);
}
