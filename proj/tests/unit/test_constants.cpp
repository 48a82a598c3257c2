#include "hleray/constants.hpp"
#include "hleray/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hleray;

namespace {

// Golden-section minimum of tau + A/(tau + B) on [0, hi].
double golden_min(double A, double B, double hi) {
  auto g = [&](double t) { return t + A / (t + B); };
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  for (int it = 0; it < 300; ++it) {
    const double a = hi - r * (hi - lo);
    const double b = lo + r * (hi - lo);
    if (g(a) < g(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return std::min(g(0.0), g(0.5 * (lo + hi)));
}

} // namespace

TEST_CASE("spot constants") {
  const ConstantReport r = constant_report(Params{3, 0.0});
  CHECK(r.c_solenoidal == doctest::Approx(25.0 / 68.0).epsilon(1e-14));
  CHECK(r.c_tor == 2.25);
  CHECK(r.c_pol == doctest::Approx(25.0 / 68.0).epsilon(1e-14));
  CHECK(r.c_axis == r.c_solenoidal);
  CHECK(c_solenoidal(Params{3, 2.0}) == 8.25);
  for (int N = 3; N <= 8; ++N) CHECK(c_solenoidal(Params{N, -0.5 * (N - 2)}) == 0.0);
}

TEST_CASE("c_axis is c_pol from N = 4") {
  for (double g : {-2.0, 0.0, 3.0, 9.0}) {
    const Params p{5, g};
    CHECK(c_axis(p) == c_pol(p));
  }
}

TEST_CASE("tau_min against golden section") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(2, 10);
  std::uniform_real_distribution<double> gam(-10.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const Params p{dim(rng), gam(rng)};
    const TauMinResult t = tau_min(p);
    const double A = 4.0 * (p.N - 1) * (p.gamma - 1.0);
    const double B = std::pow(p.gamma - 0.5 * p.N, 2) + p.N - 1;
    CHECK(t.a_param == doctest::Approx(A));
    CHECK(t.b_param == doctest::Approx(B));
    CHECK(std::abs(t.value - golden_min(A, B, 1000.0)) <= 1e-10 * std::max(1.0, std::abs(t.value)));
  }
}

TEST_CASE("interval endpoints") {
  const GammaInterval I3 = interval_IN(3);
  CHECK(I3.lower == doctest::Approx(1.0));
  CHECK(std::isinf(I3.upper));
  const GammaInterval I4 = interval_IN(4);
  CHECK(I4.lower == doctest::Approx(8.0 - 3.0 * std::sqrt(5.0)).epsilon(1e-13));
  CHECK(I4.upper == doctest::Approx(8.0 + 3.0 * std::sqrt(5.0)).epsilon(1e-13));
  for (int N = 4; N <= 8; ++N) {
    const GammaInterval I = interval_IN(N);
    for (double g : {I.lower, I.upper}) {
      const Params p{N, g};
      CHECK(std::abs(c_pol(p) - c_tor(p)) <= 1e-9);
    }
  }
  CHECK(in_interval(Params{3, 5.0}));
  CHECK_FALSE(in_interval(Params{4, 0.0}));
}

TEST_CASE("two-dimensional interval wraps") {
  const GammaInterval I = gamma_interval(2);
  CHECK(I.wraps);
  CHECK(in_interval(Params{2, 1.0}));
  CHECK(in_interval(Params{2, -3.0}));
  CHECK_FALSE(in_interval(Params{2, 0.0}));
  // The min form and the piecewise form agree here too.
  CHECK(cm_orig(Params{2, 0.0}) == doctest::Approx(c_solenoidal(Params{2, 0.0})));
}

TEST_CASE("quartic and G(0)") {
  CHECK(quartic_B(0.0, 3) == 0.0);
  CHECK(quartic_B(1.0, 3) == doctest::Approx(-3.0));
  const Params p{3, 0.0};
  CHECK(g_zero(p) == doctest::Approx(1.0 + 8.0 / 18.0625).epsilon(1e-14));
  CHECK(g_zero_quartic(p) == doctest::Approx(26.0625 / 18.0625).epsilon(1e-14));
  CHECK(correction_c(p) == 1.0);
  const Params q{3, 2.5};
  CHECK(c_tor(q) + 2.0 <= c_pol(q));
}

TEST_CASE("branch order and quartic implication on a grid") {
  const IdentityReport r = verify_identity(std::vector<int>{3, 4, 5, 6}, -10.0, 10.0, 0.05);
  CHECK(r.violations == 0);
  CHECK(r.max_discrepancy < 1e-12);
}

TEST_CASE("perturbed identity is reported") {
  const IdentityReport r = verify_identity(std::vector<int>{3}, 0.0, 1.0, 0.5, 1e-12, 1e-6);
  CHECK(r.violations > 0);
  CHECK(r.max_discrepancy == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(Params({1, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(Params({3, NAN}).validate(), DomainError);
  CHECK_THROWS_AS(Params({2, 0.0}).validate(3), DomainError);
}
