#include "hleray/error.hpp"
#include "hleray/sphere.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace hleray;

namespace {

// int_{S^{N-1}} x^e dsigma = 2 prod Gamma((e_i+1)/2) / Gamma((|e|+N)/2) for even e, else 0.
double monomial_moment(const std::vector<int>& e) {
  double num = 2.0;
  int total = 0;
  for (int k : e) {
    if (k % 2) return 0.0;
    num *= std::tgamma(0.5 * (k + 1));
    total += k;
  }
  return num / std::tgamma(0.5 * (total + static_cast<int>(e.size())));
}

void for_each_exponent(int N, int degree, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> e(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == N - 1) {
      e[static_cast<std::size_t>(k)] = left;
      fn(e);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      e[static_cast<std::size_t>(k)] = d;
      rec(k + 1, left - d);
    }
  };
  for (int d = 0; d <= degree; ++d) rec(0, d);
}

} // namespace

TEST_CASE("sphere area") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI));
}

TEST_CASE("quadrature integrates monomials exactly up to its degree") {
  for (int N : {3, 4, 5}) {
    const SphereGrid g = build_grid(N, 5);
    CHECK(g.exactness_degree >= 9);
    CHECK((g.nodes.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-14);
    double worst = 0.0;
    for_each_exponent(N, g.exactness_degree, [&](const std::vector<int>& e) {
      Eigen::VectorXd f = Eigen::VectorXd::Ones(g.size());
      for (int k = 0; k < N; ++k) f = f.cwiseProduct(g.nodes.col(k).array().pow(e[k]).matrix());
      worst = std::max(worst, std::abs(g.integrate(f) - monomial_moment(e)));
    });
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("harmonic basis") {
  for (int N : {3, 4, 5}) {
    const int L = 4;
    const SphereGrid g = build_grid(N, L + 2);
    const HarmonicBasis B = harmonic_basis(N, L, g);
    std::size_t total = 0;
    for (int nu = 0; nu <= L; ++nu) {
      CHECK(static_cast<std::size_t>(B.dim(nu)) == harmonic_dimension(nu, N));
      total += harmonic_dimension(nu, N);
    }
    CHECK(static_cast<std::size_t>(B.size()) == total);
    const Eigen::MatrixXd gram = B.Y.transpose() * g.weights.asDiagonal() * B.Y;
    CHECK((gram - Eigen::MatrixXd::Identity(B.size(), B.size())).cwiseAbs().maxCoeff() < 1e-12);
    // Eigenvalues against the Hessian form of Lap_s applied to the polynomials.
    for (int b = 0; b < B.size(); ++b) {
      const Eigen::VectorXd direct = laplace_beltrami_polynomial(B.polys[static_cast<std::size_t>(b)], g.nodes);
      CHECK((direct + B.alpha[b] * B.Y.col(b)).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXd spectral = laplace_beltrami(B, g, B.Y.col(b));
      CHECK((spectral - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CHECK(harmonic_dimension(2, 3) == 5);
  CHECK(harmonic_dimension(3, 4) == 16);
}

TEST_CASE("spherical gradient by finite differences along great circles") {
  const int N = 3;
  const SphereGrid g = build_grid(N, 6);
  const HarmonicBasis B = harmonic_basis(N, 4, g);
  const Polynomial& p = B.polys[7];
  const Eigen::MatrixXd G = spherical_gradient(B, g, B.Y.col(7));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < g.size(); i += 7) {
    const Eigen::RowVectorXd x = g.nodes.row(i);
    Eigen::RowVectorXd d(N);
    for (int k = 0; k < N; ++k) d[k] = normal(rng);
    d -= d.dot(x) * x;
    d.normalize();
    Eigen::MatrixXd pts(2, N);
    pts.row(0) = std::cos(h) * x + std::sin(h) * d;
    pts.row(1) = std::cos(h) * x - std::sin(h) * d;
    const Eigen::VectorXd v = p.evaluate(pts);
    CHECK(G.row(i).dot(d) == doctest::Approx((v[0] - v[1]) / (2.0 * h)).epsilon(1e-7));
  }
}

TEST_CASE("expansion beyond the basis is refused") {
  const SphereGrid g = build_grid(3, 6);
  const HarmonicBasis B = harmonic_basis(3, 2, g);
  const Eigen::VectorXd f = g.nodes.col(0).array().pow(4).matrix();
  CHECK_THROWS_AS(expand(B, g, f), TruncationError);
}
