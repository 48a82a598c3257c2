#include "hleray/sphere.hpp"

#include "hleray/error.hpp"

#include <gsl/gsl_integration.h>

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>

namespace hleray {

namespace {

using Exponent = std::vector<int>;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point rule for the weight (1-x)^a (1+x)^a on [-1, 1].
Rule jacobi_rule(int n, double a) {
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
      gsl_integration_fixed_alloc(gsl_integration_fixed_jacobi, static_cast<std::size_t>(n), -1.0, 1.0, a, a),
      &gsl_integration_fixed_free);
  if (!ws) {
    throw DomainError("Gauss-Jacobi rule allocation failed");
  }
  const double* xs = gsl_integration_fixed_nodes(ws.get());
  const double* ws_ = gsl_integration_fixed_weights(ws.get());
  Rule r;
  r.x.assign(xs, xs + n);
  r.w.assign(ws_, ws_ + n);
  return r;
}

// All exponent vectors of total degree d in N variables, lexicographically
// descending in the first variable.
std::vector<Exponent> monomials(int N, int d) {
  std::vector<Exponent> out;
  Exponent e(N, 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == N - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

template <class S>
using PolyMap = std::map<Exponent, S>;

template <class S>
bool is_zero(const S& s) {
  return s == S(0);
}

template <class S>
PolyMap<S> laplacian(const PolyMap<S>& p) {
  PolyMap<S> out;
  for (const auto& [e, c] : p) {
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] >= 2) {
        Exponent f = e;
        f[v] -= 2;
        out[f] += c * S(e[v] * (e[v] - 1));
      }
    }
  }
  std::erase_if(out, [](const auto& kv) { return is_zero(kv.second); });
  return out;
}

template <class S>
PolyMap<S> times_r2(const PolyMap<S>& p) {
  PolyMap<S> out;
  for (const auto& [e, c] : p) {
    for (std::size_t v = 0; v < e.size(); ++v) {
      Exponent f = e;
      f[v] += 2;
      out[f] += c;
    }
  }
  return out;
}

// Projection of a homogeneous degree-nu polynomial onto harmonics:
// sum_j (-1)^j |x|^{2j} Lap^j p / (2^j j! prod_{i=1..j} (N + 2 nu - 2 - 2i)).
template <class S>
PolyMap<S> harmonic_projection(const PolyMap<S>& p, int N, int nu) {
  PolyMap<S> result = p;
  PolyMap<S> lap = p;
  long long denom = 1;
  for (int j = 1; 2 * j <= nu; ++j) {
    lap = laplacian(lap);
    if (lap.empty()) break;
    denom *= 2LL * j * (N + 2 * nu - 2 - 2 * j);
    PolyMap<S> term = lap;
    for (int k = 0; k < j; ++k) term = times_r2(term);
    const S factor = S((j % 2 == 0) ? 1 : -1) / S(denom);
    for (const auto& [e, c] : term) result[e] += factor * c;
  }
  std::erase_if(result, [](const auto& kv) { return is_zero(kv.second); });
  return result;
}

double to_double(double x) { return x; }
double to_double(const boost::rational<long long>& x) {
  return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

// Degree at or below which harmonic projection uses exact rationals.
constexpr int kExactDegree = 6;

// Column j holds the coefficients (over monomials(N, nu)) of the harmonic
// projection of the j-th monomial with first exponent <= 1.
Eigen::MatrixXd projected_monomials(int N, int nu, const std::vector<Exponent>& mons,
                                    const std::map<Exponent, int>& index) {
  std::vector<Exponent> starts;
  for (const auto& e : mons) {
    if (e[0] <= 1) starts.push_back(e);
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mons.size()),
                                            static_cast<Eigen::Index>(starts.size()));
  for (std::size_t j = 0; j < starts.size(); ++j) {
    auto fill = [&](const auto& proj) {
      for (const auto& [e, c] : proj) C(index.at(e), static_cast<Eigen::Index>(j)) = to_double(c);
    };
    if (nu <= kExactDegree) {
      using R = boost::rational<long long>;
      PolyMap<R> p{{starts[j], R(1)}};
      const auto proj = harmonic_projection(p, N, nu);
      if (!laplacian(proj).empty()) {
        throw TruncationError("harmonic projection is not harmonic");
      }
      fill(proj);
    } else {
      PolyMap<double> p{{starts[j], 1.0}};
      const auto proj = harmonic_projection(p, N, nu);
      double res = 0.0;
      double scale = 0.0;
      for (const auto& [e, c] : laplacian(proj)) res = std::max(res, std::abs(c));
      for (const auto& [e, c] : proj) scale = std::max(scale, std::abs(c));
      if (res > 1e-10 * scale) {
        throw TruncationError("harmonic projection residual " + std::to_string(res / scale));
      }
      fill(proj);
    }
  }
  return C;
}

// nodes x monomials matrix of monomial values.
Eigen::MatrixXd monomial_values(const Eigen::MatrixXd& pts, const std::vector<Exponent>& mons, int max_deg) {
  const Eigen::Index n = pts.rows();
  const int N = static_cast<int>(pts.cols());
  std::vector<Eigen::MatrixXd> pw(N, Eigen::MatrixXd(n, max_deg + 1));
  for (int v = 0; v < N; ++v) {
    pw[v].col(0).setOnes();
    for (int e = 1; e <= max_deg; ++e) pw[v].col(e) = pw[v].col(e - 1).cwiseProduct(pts.col(v));
  }
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(mons.size()));
  for (std::size_t m = 0; m < mons.size(); ++m) {
    Eigen::VectorXd col = Eigen::VectorXd::Ones(n);
    for (int v = 0; v < N; ++v) {
      if (mons[m][v] > 0) col = col.cwiseProduct(pw[v].col(mons[m][v]));
    }
    out.col(static_cast<Eigen::Index>(m)) = col;
  }
  return out;
}

} // namespace

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

int resolution_for_degree(int degree) { return std::max(4, (degree + 2) / 2); }

SphereGrid build_grid(int N, int resolution) {
  if (N < 3) {
    throw DomainError("sphere grids need N >= 3");
  }
  if (resolution < 4) {
    throw TruncationError("sphere resolution must be at least 4, got " + std::to_string(resolution));
  }
  std::vector<Rule> polar;
  for (int k = 1; k <= N - 2; ++k) {
    const int m = N - 1 - k;
    polar.push_back(jacobi_rule(resolution, 0.5 * (m - 1)));
  }
  const int n_phi = 2 * resolution;
  Eigen::Index count = n_phi;
  for (int k = 0; k < N - 2; ++k) count *= resolution;

  SphereGrid g;
  g.N = N;
  g.resolution = resolution;
  g.exactness_degree = 2 * resolution - 1;
  g.nodes.resize(count, N);
  g.weights.resize(count);

  std::vector<int> idx(N - 2, 0);
  Eigen::Index row = 0;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  while (true) {
    double w = dphi;
    double s = 1.0;
    Eigen::VectorXd x(N);
    for (int k = 0; k < N - 2; ++k) {
      const double c = polar[k].x[idx[k]];
      x[k] = s * c;
      s *= std::sqrt((1.0 - c) * (1.0 + c));
      w *= polar[k].w[idx[k]];
    }
    for (int m = 0; m < n_phi; ++m) {
      const double phi = m * dphi;
      Eigen::VectorXd y = x;
      y[N - 2] = s * std::cos(phi);
      y[N - 1] = s * std::sin(phi);
      g.nodes.row(row) = y.transpose() / y.norm();
      g.weights[row] = w;
      ++row;
    }
    int k = N - 3;
    while (k >= 0 && ++idx[k] == resolution) {
      idx[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return g;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& e : exponents) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out;
  out.N = N;
  for (std::size_t m = 0; m < exponents.size(); ++m) {
    if (exponents[m][var] == 0) continue;
    Exponent e = exponents[m];
    const double c = coeffs[m] * e[var];
    e[var] -= 1;
    out.exponents.push_back(std::move(e));
    out.coeffs.push_back(c);
  }
  return out;
}

Eigen::VectorXd Polynomial::evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(points.rows());
  for (std::size_t m = 0; m < exponents.size(); ++m) {
    Eigen::VectorXd term = Eigen::VectorXd::Constant(points.rows(), coeffs[m]);
    for (int v = 0; v < N; ++v) {
      for (int p = 0; p < exponents[m][v]; ++p) term = term.cwiseProduct(points.col(v));
    }
    out += term;
  }
  return out;
}

std::size_t harmonic_dimension(int nu, int N) {
  if (nu < 0 || N < 2) {
    throw DomainError("harmonic_dimension needs nu >= 0 and N >= 2");
  }
  if (N == 2) return nu == 0 ? 1 : 2;
  // (2 nu + N - 2) / (nu + N - 2) * C(nu + N - 2, N - 2)
  std::size_t binom = 1;
  for (int i = 1; i <= N - 2; ++i) binom = binom * static_cast<std::size_t>(nu + i) / static_cast<std::size_t>(i);
  return binom * static_cast<std::size_t>(2 * nu + N - 2) / static_cast<std::size_t>(nu + N - 2);
}

HarmonicBasis harmonic_basis(int N, int L, const SphereGrid& grid, bool operator_matrices) {
  if (N != grid.N) {
    throw DomainError("basis and grid dimensions differ");
  }
  if (L < 0) {
    throw DomainError("basis degree must be nonnegative");
  }
  if (grid.exactness_degree < 2 * L) {
    throw TruncationError("grid exactness " + std::to_string(grid.exactness_degree) +
                          " too low for basis degree " + std::to_string(L));
  }
  const Eigen::MatrixXd& X = grid.nodes;
  const Eigen::VectorXd& w = grid.weights;
  const Eigen::Index n = X.rows();

  HarmonicBasis B;
  B.N = N;
  B.L = L;
  B.offset.push_back(0);
  std::vector<Eigen::MatrixXd> Yblocks;
  std::vector<std::vector<Eigen::MatrixXd>> Gblocks(N);

  std::vector<Exponent> prev_mons;
  Eigen::MatrixXd prev_vals;
  for (int nu = 0; nu <= L; ++nu) {
    const auto mons = monomials(N, nu);
    std::map<Exponent, int> index;
    for (std::size_t m = 0; m < mons.size(); ++m) index[mons[m]] = static_cast<int>(m);

    Eigen::MatrixXd C = projected_monomials(N, nu, mons, index);
    const Eigen::MatrixXd vals = monomial_values(X, mons, nu);
    Eigen::MatrixXd V = vals * C;
    const Eigen::Index d = C.cols();
    if (static_cast<std::size_t>(d) != harmonic_dimension(nu, N)) {
      throw TruncationError("harmonic space dimension mismatch at degree " + std::to_string(nu));
    }

    // Modified Gram-Schmidt in the quadrature inner product, applied twice.
    for (Eigen::Index j = 0; j < d; ++j) {
      const double before = std::sqrt(V.col(j).cwiseAbs2().dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) {
          const double r = V.col(i).cwiseProduct(w).dot(V.col(j));
          V.col(j) -= r * V.col(i);
          C.col(j) -= r * C.col(i);
        }
      }
      const double after = std::sqrt(V.col(j).cwiseAbs2().dot(w));
      if (!(after > 1e-10 * before)) {
        throw TruncationError("rank deficiency at degree " + std::to_string(nu) + "; grid too coarse");
      }
      V.col(j) /= after;
      C.col(j) /= after;
    }

    Yblocks.push_back(vals * C);

    // Ambient gradient from coefficients, then tangential projection.
    std::vector<Eigen::MatrixXd> amb(N, Eigen::MatrixXd::Zero(n, d));
    if (nu > 0) {
      std::map<Exponent, int> pindex;
      for (std::size_t m = 0; m < prev_mons.size(); ++m) pindex[prev_mons[m]] = static_cast<int>(m);
      for (int c = 0; c < N; ++c) {
        Eigen::MatrixXd Dc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(prev_mons.size()),
                                                   static_cast<Eigen::Index>(mons.size()));
        for (std::size_t m = 0; m < mons.size(); ++m) {
          if (mons[m][c] == 0) continue;
          Exponent e = mons[m];
          e[c] -= 1;
          Dc(pindex.at(e), static_cast<Eigen::Index>(m)) = mons[m][c];
        }
        amb[c] = prev_vals * (Dc * C);
      }
    }
    Eigen::MatrixXd radial = Eigen::MatrixXd::Zero(n, d);
    for (int c = 0; c < N; ++c) radial += X.col(c).asDiagonal() * amb[c];
    for (int c = 0; c < N; ++c) Gblocks[c].push_back(amb[c] - X.col(c).asDiagonal() * radial);

    for (Eigen::Index j = 0; j < d; ++j) {
      Polynomial p;
      p.N = N;
      for (std::size_t m = 0; m < mons.size(); ++m) {
        if (C(static_cast<Eigen::Index>(m), j) != 0.0) {
          p.exponents.push_back(mons[m]);
          p.coeffs.push_back(C(static_cast<Eigen::Index>(m), j));
        }
      }
      B.polys.push_back(std::move(p));
      B.degree.push_back(nu);
    }
    B.offset.push_back(B.offset.back() + static_cast<int>(d));
    prev_mons = mons;
    prev_vals = vals;
  }

  const int nb = B.offset.back();
  B.alpha.resize(nb);
  for (int j = 0; j < nb; ++j) B.alpha[j] = static_cast<double>(B.degree[j]) * (B.degree[j] + N - 2);
  B.Y.resize(n, nb);
  for (int nu = 0; nu <= L; ++nu) B.Y.middleCols(B.offset[nu], B.dim(nu)) = Yblocks[nu];
  B.grad.assign(N, Eigen::MatrixXd(n, nb));
  for (int c = 0; c < N; ++c) {
    for (int nu = 0; nu <= L; ++nu) B.grad[c].middleCols(B.offset[nu], B.dim(nu)) = Gblocks[c][nu];
  }
  B.analysis = (w.asDiagonal() * B.Y).transpose();

  if (operator_matrices) {
    for (int k = 0; k < N; ++k) {
      B.mult_sigma.push_back((B.analysis * (X.col(k).asDiagonal() * B.Y)).transpose());
      B.grad_proj.push_back((B.analysis * B.grad[k]).transpose());
    }
  }
  return B;
}

Expansion expand(const HarmonicBasis& basis, const SphereGrid& grid,
                 const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance) {
  Expansion e;
  e.coeffs = basis.analysis * f;
  const double total = grid.integrate(f.cwiseAbs2());
  const Eigen::VectorXd rem = f - basis.Y * e.coeffs;
  const double lost = grid.integrate(rem.cwiseAbs2());
  e.residual = total > 0.0 ? std::sqrt(lost / total) : 0.0;
  if (e.residual > tolerance) {
    throw TruncationError("sphere expansion residual " + std::to_string(e.residual) + " exceeds tolerance");
  }
  return e;
}

Eigen::MatrixXd spherical_gradient(const HarmonicBasis& basis, const SphereGrid& grid,
                                   const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance) {
  const Expansion e = expand(basis, grid, f, tolerance);
  Eigen::MatrixXd out(grid.size(), basis.N);
  for (int c = 0; c < basis.N; ++c) out.col(c) = basis.grad[c] * e.coeffs;
  return out;
}

Eigen::VectorXd laplace_beltrami(const HarmonicBasis& basis, const SphereGrid& grid,
                                 const Eigen::Ref<const Eigen::VectorXd>& f, double tolerance) {
  const Expansion e = expand(basis, grid, f, tolerance);
  return basis.Y * (-basis.alpha.cwiseProduct(e.coeffs));
}

Eigen::MatrixXd laplace_beltrami_vector(const HarmonicBasis& basis, const SphereGrid& grid,
                                        const Eigen::Ref<const Eigen::MatrixXd>& v, double tolerance) {
  Eigen::MatrixXd out(v.rows(), v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k) out.col(k) = laplace_beltrami(basis, grid, v.col(k), tolerance);
  return out;
}

Eigen::VectorXd spherical_divergence(const HarmonicBasis& basis, const SphereGrid& grid,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v, double tolerance) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
  for (int k = 0; k < basis.N; ++k) {
    const Expansion e = expand(basis, grid, v.col(k), tolerance);
    out += basis.grad[k] * e.coeffs;
    out -= (basis.N - 1) * grid.nodes.col(k).cwiseProduct(v.col(k));
  }
  return out;
}

Eigen::VectorXd laplace_beltrami_polynomial(const Polynomial& p, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const int N = p.N;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(points.rows());
  for (int a = 0; a < N; ++a) {
    const Polynomial pa = p.derivative(a);
    out -= (N - 1) * points.col(a).cwiseProduct(pa.evaluate(points));
    for (int b = 0; b < N; ++b) {
      const Eigen::VectorXd pab = pa.derivative(b).evaluate(points);
      if (a == b) out += pab;
      out -= points.col(a).cwiseProduct(points.col(b)).cwiseProduct(pab);
    }
  }
  return out;
}

CommutatorResiduals check_commutators(const HarmonicBasis& basis, const SphereGrid& grid, int index) {
  if (index < 0 || index >= basis.size()) {
    throw DomainError("basis index out of range");
  }
  if (basis.degree[index] + 1 > basis.L) {
    throw TruncationError("commutator check needs basis degree at least nu + 1");
  }
  const int N = basis.N;
  const double a = basis.alpha[index];
  const Eigen::VectorXd f = basis.Y.col(index);
  CommutatorResiduals r;
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd sk = grid.nodes.col(k);
    const Eigen::VectorXd gk = basis.grad[k].col(index);
    const Eigen::VectorXd lhs1 = laplace_beltrami(basis, grid, sk.cwiseProduct(f));
    const Eigen::VectorXd rhs1 = -(a + N - 1) * sk.cwiseProduct(f) + 2.0 * gk;
    r.sigma_identity = std::max(r.sigma_identity, (lhs1 - rhs1).cwiseAbs().maxCoeff());
    const Eigen::VectorXd lhs2 = laplace_beltrami(basis, grid, gk);
    const Eigen::VectorXd rhs2 = (-a + N - 3) * gk + 2.0 * a * sk.cwiseProduct(f);
    r.gradient_identity = std::max(r.gradient_identity, (lhs2 - rhs2).cwiseAbs().maxCoeff());
  }
  return r;
}

} // namespace hleray
