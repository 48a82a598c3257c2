#include "hleray/pt.hpp"

#include "hleray/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace hleray {

ModeCoefficients ModeCoefficients::zero(const DiscPtr& disc, double radial_power) {
  ModeCoefficients f;
  f.disc = disc;
  f.radial_power = radial_power;
  f.coeffs = Eigen::MatrixXd::Zero(disc->radial.M, disc->nb());
  return f;
}

int ModeCoefficients::max_degree(double rel) const {
  const double peak = coeffs.cwiseAbs().maxCoeff();
  if (peak == 0.0) return -1;
  const HarmonicBasis& B = disc->basis;
  for (int nu = B.L; nu >= 0; --nu) {
    if (coeffs.middleCols(B.offset[nu], B.dim(nu)).cwiseAbs().maxCoeff() > rel * peak) return nu;
  }
  return -1;
}

ModeCoefficients single_mode(const DiscPtr& disc, int basis_index, const RadialProfile& profile,
                             double radial_power) {
  if (basis_index < 0 || basis_index >= disc->nb()) {
    throw DomainError("basis index out of range");
  }
  if (!(profile.grid == disc->radial)) {
    throw DomainError("profile grid does not match the discretization");
  }
  ModeCoefficients f = ModeCoefficients::zero(disc, radial_power);
  f.coeffs.col(basis_index) = profile.values;
  return f;
}

ModeCoefficients poloidal_potential(const AmbientField& u, double mode0_tolerance) {
  const Discretization& d = *u.disc;
  const ScalarSamples ur = radial_component(u);
  ModeCoefficients f = ModeCoefficients::zero(u.disc, u.radial_power);
  const Eigen::MatrixXd C = ur.values * d.basis.analysis.transpose();

  // The residual is measured against the whole field: when u_R is round-off
  // noise its own norm is no scale at all.
  const Eigen::VectorXd& w = d.sphere.weights;
  double total = 0.0;
  for (int k = 0; k < u.N(); ++k) total += (u.modes[k].cwiseAbs2() * d.gram_values.diagonal()).sum();
  const double lost = ((ur.values - C * d.basis.Y.transpose()).cwiseAbs2() * w).sum();
  if (total > 0.0 && std::sqrt(lost / total) > 1e-8) {
    throw TruncationError("radial component not resolved by the basis (relative residual " +
                          std::to_string(std::sqrt(lost / total)) + ")");
  }

  double scale = 0.0;
  for (const auto& m : u.modes) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  const double mode0 = C.col(0).cwiseAbs().maxCoeff();
  if (scale > 0.0 && mode0 > mode0_tolerance * scale) {
    throw FieldError("radial component has nonzero spherical mean (relative " +
                     std::to_string(mode0 / scale) + "); field is not solenoidal");
  }
  // Coefficients at round-off level relative to the field are dropped so
  // that noise does not raise the degree of the potential.
  const double floor = kRoundoffFloor * scale;
  for (int b = 1; b < d.nb(); ++b) {
    f.coeffs.col(b) = -C.col(b).unaryExpr([floor](double c) { return std::abs(c) <= floor ? 0.0 : c; }) /
                      d.basis.alpha[b];
  }
  return f;
}

AmbientField apply_D(const ModeCoefficients& f) {
  const Discretization& d = *f.disc;
  const int N = d.N();
  const int deg = f.max_degree();
  if (deg >= d.basis_degree()) {
    throw TruncationError("potential of degree " + std::to_string(deg) +
                          " needs basis degree " + std::to_string(deg + 1));
  }
  AmbientField u = AmbientField::zero(f.disc, f.radial_power);
  if (deg < 1) {
    u.flags = {true, false, true};
    return u;
  }
  const Eigen::MatrixXd aF = f.coeffs * d.basis.alpha.asDiagonal();
  Eigen::MatrixXd dF = radial_dt(d.radial, f.coeffs);
  dF += (f.radial_power + N - 1) * f.coeffs;
  for (int k = 0; k < N; ++k) {
    u.modes[k] = -aF * d.basis.mult_sigma[k] - dF * d.basis.grad_proj[k];
  }
  u.flags = {true, false, true};
  return u;
}

PTSplit pt_split(const AmbientField& u, double solenoidal_tolerance) {
  const FieldChecks& c = u.checks();
  if (c.divergence > solenoidal_tolerance) {
    throw FieldError("field is not solenoidal: relative divergence norm " + std::to_string(c.divergence));
  }
  PTSplit s;
  s.potential = poloidal_potential(u);
  s.u_P = apply_D(s.potential);
  s.u_T = u - s.u_P;
  s.u_T.flags = {true, true, false};
  return s;
}

AmbientField random_solenoidal(const DiscPtr& disc, std::uint64_t seed, int L, const RandomFieldOptions& opts) {
  const Discretization& d = *disc;
  const int N = d.N();
  if (L < 1 || L + 1 > d.basis_degree()) {
    throw DomainError("random_solenoidal needs 1 <= L <= basis_degree - 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-opts.center_range, opts.center_range);
  std::uniform_real_distribution<double> width(opts.min_half_width, opts.max_half_width);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_bump = [&] { return bump_profile(d.radial, center(rng), width(rng)); };

  AmbientField u = AmbientField::zero(disc, 0.0);
  if (opts.poloidal) {
    ModeCoefficients f = ModeCoefficients::zero(disc, 0.0);
    for (int b = d.basis.offset[1]; b < d.basis.offset[L + 1]; ++b) {
      f.coeffs.col(b) = normal(rng) * random_bump().values;
    }
    u += apply_D(f);
  }
  if (opts.toroidal) {
    const Eigen::MatrixXd& X = d.sphere.nodes;
    for (int term = 0; term < opts.toroidal_terms; ++term) {
      std::uniform_int_distribution<int> pick(0, N - 1);
      int i = pick(rng);
      int j = pick(rng);
      while (j == i) j = pick(rng);
      if (i > j) std::swap(i, j);
      // P is a random polynomial in rho^2 = x_i^2 + x_j^2 and the other coordinates.
      const Eigen::VectorXd rho2 = X.col(i).cwiseAbs2() + X.col(j).cwiseAbs2();
      std::vector<int> others;
      for (int m = 0; m < N; ++m) {
        if (m != i && m != j) others.push_back(m);
      }
      Eigen::VectorXd P = Eigen::VectorXd::Constant(X.rows(), normal(rng));
      const int extra = 2 + static_cast<int>(rng() % 3);
      for (int e = 0; e < extra; ++e) {
        Eigen::VectorXd mono = Eigen::VectorXd::Ones(X.rows());
        int budget = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(L));
        while (budget > 0) {
          const int choice = static_cast<int>(rng() % (others.size() + 1));
          if (choice == static_cast<int>(others.size())) {
            if (budget < 2) continue;
            mono = mono.cwiseProduct(rho2);
            budget -= 2;
          } else {
            mono = mono.cwiseProduct(X.col(others[static_cast<std::size_t>(choice)]));
            budget -= 1;
          }
        }
        P += normal(rng) * mono;
      }
      const RadialProfile w = random_bump();
      const double amp = normal(rng);
      AmbientField t = AmbientField::zero(disc, 0.0);
      t.modes[i] = amp * w.values * sphere_coefficients(disc, -P.cwiseProduct(X.col(j)));
      t.modes[j] = amp * w.values * sphere_coefficients(disc, P.cwiseProduct(X.col(i)));
      u += t;
    }
  }
  u.flags = {true, !opts.poloidal, !opts.toroidal};
  return u;
}

} // namespace hleray
