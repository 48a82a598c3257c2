#pragma once

// Product Gauss quadrature on S^{N-1}, orthonormal harmonic polynomial bases
// and spectral spherical operators.

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace hleray {

/// Quadrature on the unit sphere S^{N-1} in R^N.
///
/// Polar angles theta_1..theta_{N-2} use `resolution`-point Gauss-Jacobi
/// rules in cos(theta_k) with weight sin^{N-1-k}; the azimuth uses
/// 2*resolution equispaced points.
struct SphereGrid {
  int N = 0;
  int resolution = 0;
  int exactness_degree = 0;
  Eigen::MatrixXd nodes;    ///< count x N, unit rows
  Eigen::VectorXd weights;  ///< count, positive

  Eigen::Index size() const { return weights.size(); }
  double integrate(const Eigen::Ref<const Eigen::VectorXd>& f) const { return weights.dot(f); }
};

/// |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

SphereGrid build_grid(int N, int resolution);

/// Smallest resolution whose exactness degree is at least `degree`.
int resolution_for_degree(int degree);

/// Sparse real polynomial in N variables.
struct Polynomial {
  int N = 0;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coeffs;

  int degree() const;
  Polynomial derivative(int var) const;
  /// Values at the rows of `points`.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points) const;
};

/// dim H_nu = (2 nu + N - 2)(nu + N - 3)! / (nu! (N - 2)!).
std::size_t harmonic_dimension(int nu, int N);

/// Orthonormal basis of harmonic polynomials of degree 0..L, sampled on a grid.
///
/// Basis functions are ordered by degree; `offset[nu]` is the first index of
/// degree nu and `offset[L+1]` the total count.
struct HarmonicBasis {
  int N = 0;
  int L = 0;
  std::vector<int> degree;
  std::vector<int> offset;
  std::vector<Polynomial> polys;
  Eigen::VectorXd alpha;                 ///< nu (nu + N - 2) per basis index
  Eigen::MatrixXd Y;                     ///< nodes x nb
  Eigen::MatrixXd analysis;              ///< nb x nodes, Y^T W
  std::vector<Eigen::MatrixXd> grad;     ///< per component c: nodes x nb, (grad_sigma Y)_c
  // Coefficient maps acting on row vectors a (f = Y a^T): a -> a * mat.
  std::vector<Eigen::MatrixXd> mult_sigma; ///< per k: f -> sigma_k f, projected
  std::vector<Eigen::MatrixXd> grad_proj;  ///< per c: f -> (grad_sigma f)_c, projected

  int size() const { return static_cast<int>(degree.size()); }
  int dim(int nu) const { return offset[nu + 1] - offset[nu]; }
};

/// Builds the basis. Requires grid.exactness_degree >= 2L (always odd, so
/// products with sigma and gradients of degree-L elements project exactly);
/// throws TruncationError otherwise or on rank deficiency.
/// `operator_matrices` = false skips mult_sigma and grad_proj.
HarmonicBasis harmonic_basis(int N, int L, const SphereGrid& grid, bool operator_matrices = true);

/// Harmonic coefficients of nodal samples.
struct Expansion {
  Eigen::VectorXd coeffs;
  double residual = 0.0;  ///< relative L2(S) residual of the truncated expansion
};

/// Projects `f` onto the basis; throws TruncationError if the relative
/// residual exceeds `tolerance`.
Expansion expand(const HarmonicBasis& basis, const SphereGrid& grid,
                 const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance = 1e-8);

/// Tangential gradient, nodes x N.
Eigen::MatrixXd spherical_gradient(const HarmonicBasis& basis, const SphereGrid& grid,
                                   const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance = 1e-8);

Eigen::VectorXd laplace_beltrami(const HarmonicBasis& basis, const SphereGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance = 1e-8);

/// Componentwise Laplace-Beltrami of a vector field given as nodes x N.
Eigen::MatrixXd laplace_beltrami_vector(const HarmonicBasis& basis, const SphereGrid& grid,
                                        const Eigen::Ref<const Eigen::MatrixXd>& v, double tolerance = 1e-8);

/// Spherical divergence of the tangential part of v (nodes x N).
Eigen::VectorXd spherical_divergence(const HarmonicBasis& basis, const SphereGrid& grid,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v, double tolerance = 1e-8);

/// Laplace-Beltrami of a polynomial restricted to the sphere, evaluated from
/// its ambient derivatives: Lap p - sum sigma_a sigma_b p_ab - (N-1) sigma.grad p.
Eigen::VectorXd laplace_beltrami_polynomial(const Polynomial& p, const Eigen::Ref<const Eigen::MatrixXd>& points);

struct CommutatorResiduals {
  double sigma_identity = 0.0;     ///< sup |Lap_s(sigma f) + sigma (alpha + N - 1) f - 2 grad_s f|
  double gradient_identity = 0.0;  ///< sup |Lap_s grad_s f - (-alpha + N - 3) grad_s f - 2 alpha sigma f|
};

/// Residuals of the two commutator identities for basis element `index`.
/// Requires its degree to be at most L - 1.
CommutatorResiduals check_commutators(const HarmonicBasis& basis, const SphereGrid& grid, int index);

} // namespace hleray
