#include "hleray/quotient.hpp"

#include "hleray/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

namespace hleray {

namespace {

std::mutex& fft_planner_mutex() {
  static std::mutex m;
  return m;
}

double sqr(double x) { return x * x; }

Eigen::VectorXd exp_profile(const RadialGrid& g, double k, const Eigen::VectorXd& support) {
  Eigen::VectorXd out(g.M);
  for (int j = 0; j < g.M; ++j) {
    const double e = k * g.t(j);
    if (support[j] != 0.0 && std::abs(e) > 700.0) {
      throw OverflowError("exp(" + std::to_string(e) + ") out of double range");
    }
    out[j] = std::abs(e) > 700.0 ? 0.0 : std::exp(e);
  }
  return out;
}

} // namespace

RadialProfile bv_transform(const RadialProfile& g, const Params& p) {
  p.validate(2);
  const double c = p.classical_exponent();
  return RadialProfile(g.grid, g.values.cwiseProduct(exp_profile(g.grid, c, g.values)));
}

RadialProfile bv_inverse(const RadialProfile& f, const Params& p) {
  p.validate(2);
  const double c = p.classical_exponent();
  return RadialProfile(f.grid, f.values.cwiseProduct(exp_profile(f.grid, -c, f.values)));
}

Spectrum fet(const RadialProfile& f) {
  const RadialGrid& g = f.grid;
  const int M = g.M;
  const double h = g.h();
  Eigen::VectorXcd in = f.values.cast<std::complex<double>>();
  Eigen::VectorXcd out(M);
  fftw_plan plan;
  {
    std::lock_guard lock(fft_planner_mutex());
    plan = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fft_planner_mutex());
    fftw_destroy_plan(plan);
  }
  Spectrum s;
  s.dtau = 2.0 * std::numbers::pi / (M * h);
  s.tau.resize(M);
  s.amplitude.resize(M);
  const double norm = h / std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < M; ++i) {
    const int k = i - M / 2;
    const int src = (k + M) % M;
    const double tau = k * s.dtau;
    s.tau[i] = tau;
    s.amplitude[i] = norm * std::polar(1.0, -tau * g.t_min) * out[src];
  }
  return s;
}

double q0(double tau, double a, const Params& p) { return tau + a + sqr(p.shifted()); }

double q1(double tau, double a, const Params& p) {
  const double c2 = sqr(p.classical_exponent());
  return (tau + a - p.N + 3 + c2) * q0(tau, a, p) + 4.0 * (p.gamma - 1.0) * a;
}

double q1_expanded(double tau, double a, const Params& p) {
  const double c2 = sqr(p.classical_exponent());
  const double l2 = sqr(p.shifted());
  return tau * tau + 2.0 * (a + c2 - (p.N - 1) * p.gamma + 1.0) * tau + (c2 + a - p.N + 3) * (a + l2) +
         4.0 * (p.gamma - 1.0) * a;
}

ModeBound mode_bound(double a, const Params& p) {
  // Q1/Q0 = tau + a - N + 3 + c^2 + A'/(tau + B'), A' = 4 (gamma - 1) a, B' = a + l^2.
  const double A = 4.0 * (p.gamma - 1.0) * a;
  const double B = a + sqr(p.shifted());
  const double base = a - p.N + 3 + sqr(p.classical_exponent());
  ModeBound m;
  if (A <= B * B) {
    m.tau_star = 0.0;
    m.value = base + A / B;
  } else {
    const double s = std::sqrt(A);
    m.tau_star = s - B;
    m.value = base + 2.0 * s - B;
  }
  return m;
}

double spectral_quotient(int nu, const RadialProfile& f, const Params& p) {
  if (nu < 1) {
    throw DomainError("mode quotient needs nu >= 1");
  }
  const Spectrum s = fet(f);
  const double a = alpha(nu, p.N);
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
    const double w = std::norm(s.amplitude[i]);
    const double t2 = s.tau[i] * s.tau[i];
    num += q1(t2, a, p) * w;
    den += q0(t2, a, p) * w;
  }
  if (!(den > 0.0)) {
    throw DomainError("mode quotient of a zero profile");
  }
  return num / den;
}

QuotientReport mode_quotient(int nu, const RadialProfile& g, const Params& p, DiscPtr disc, double radial_power) {
  p.validate(3);
  if (nu < 1) {
    throw DomainError("mode quotient needs nu >= 1");
  }
  if (g.values.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("mode quotient of a zero profile");
  }
  check_support(g.grid, g.values, "profile");
  if (!disc) disc = make_discretization(p.N, g.grid, nu + 1);
  if (disc->N() != p.N || disc->basis_degree() < nu + 1) {
    throw DomainError("discretization cannot hold a degree-" + std::to_string(nu) + " potential");
  }

  QuotientReport r;
  r.N = p.N;
  r.gamma = p.gamma;
  r.nu = nu;
  // f = exp((c + q) t) g_stored.
  const RadialProfile f(g.grid, g.values.cwiseProduct(
                                    exp_profile(g.grid, p.classical_exponent() + radial_power, g.values)));
  r.spectral_value = spectral_quotient(nu, f, p);
  const AmbientField u = apply_D(single_mode(disc, disc->basis.offset[nu], g, radial_power));
  r.direct_value = weighted_integrals(u, p.gamma).quotient();
  r.bound = mode_bound(alpha(nu, p.N), p).value;
  r.gap = r.spectral_value - r.bound;
  return r;
}

double remainder(const AmbientField& u, const Params& p) {
  const Discretization& d = *u.disc;
  const double k = p.classical_exponent() + u.radial_power;
  Eigen::VectorXd slice = Eigen::VectorXd::Zero(d.radial.M);
  for (int c = 0; c < u.N(); ++c) {
    Eigen::MatrixXd dF = radial_dt(d.radial, u.modes[c]);
    dF += k * u.modes[c];
    slice += (dF * d.gram_values).cwiseProduct(dF).rowwise().sum();
  }
  Eigen::VectorXd e(d.radial.M);
  for (int j = 0; j < d.radial.M; ++j) {
    const double x = 2.0 * k * d.radial.t(j);
    if (x > 709.0) throw OverflowError("remainder weight overflows");
    e[j] = std::exp(x);
  }
  return integrate(d.radial, slice.cwiseProduct(e));
}

ToroidalQuotient toroidal_quotient(const AmbientField& u, const Params& p) {
  p.validate(3);
  if (!is_toroidal(u)) {
    const FieldChecks& c = u.checks();
    throw FieldError("field is not toroidal (radial part " + std::to_string(c.radial_component) +
                     ", spherical divergence " + std::to_string(c.spherical_divergence) + ")");
  }
  const WeightedIntegrals w = weighted_integrals(u, p.gamma);
  ToroidalQuotient q;
  q.dirichlet = w.dirichlet;
  q.hardy = w.hardy;
  q.value = w.quotient();
  q.remainder = remainder(u, p);
  q.residual = std::abs(w.dirichlet - c_tor(p) * w.hardy - q.remainder) / w.dirichlet;
  return q;
}

StrengthenedReport strengthened_check(const AmbientField& u, const Params& p,
                                      std::optional<StrengthenedBranch> requested, const PTSplit* split) {
  p.validate(3);
  StrengthenedReport r;
  const bool inside = in_interval(p);
  r.branch = inside ? StrengthenedBranch::Inside : StrengthenedBranch::Outside;
  r.regime_mismatch = requested.has_value() && *requested != r.branch;
  const WeightedIntegrals w = weighted_integrals(u, p.gamma);
  r.dirichlet = w.dirichlet;
  r.hardy = w.hardy;
  r.constant = c_solenoidal(p);
  if (!inside) {
    r.correction = correction_c(p);
    r.remainder = remainder(u, p);
    r.margin = w.dirichlet - r.constant * w.hardy - r.correction * r.remainder;
  } else {
    PTSplit local;
    if (!split) {
      local = pt_split(u);
      split = &local;
    }
    r.correction = 1.0;
    r.remainder = remainder(split->u_T, p);
    r.penalty = (c_pol(p) - c_tor(p)) * hardy_integral(split->u_P, p.gamma);
    r.margin = w.dirichlet - r.constant * w.hardy - r.penalty - r.remainder;
  }
  r.ok = !r.regime_mismatch && r.margin >= -1e-8 * w.dirichlet;
  return r;
}

double bump_energy_ratio() {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double num = integrator.integrate([](double s) { return sqr(bump_derivative(s)); }, -1.0, 1.0);
  const double den = integrator.integrate([](double s) { return sqr(bump(s)); }, -1.0, 1.0);
  return num / den;
}

namespace {

RadialGrid extremal_grid(int n, const ExtremalOptions& opts) {
  if (n < 1) {
    throw DomainError("dilation index n must be positive");
  }
  return RadialGrid{-opts.extent * n, opts.extent * n, opts.M};
}

RadialProfile dilated_bump(const RadialGrid& g, int n) { return bump_profile(g, 0.0, static_cast<double>(n)); }

} // namespace

ExtremalEntry extremal_poloidal(int n, const Params& p, const ExtremalOptions& opts) {
  p.validate(3);
  const TauMinResult tm = tau_min(p);
  if (tm.tau_star > 0.0) {
    throw RegimeError("the minimum defining C_pol is attained at tau* = " + std::to_string(tm.tau_star) +
                      " > 0; no sharpness sequence is constructed in this regime");
  }
  const RadialGrid g = extremal_grid(n, opts);
  const RadialProfile zeta = dilated_bump(g, n);
  const DiscPtr disc = make_discretization(p.N, g, 2);
  const double c = p.classical_exponent();
  ExtremalEntry e;
  e.n = n;
  e.spectral = spectral_quotient(1, zeta, p);
  const AmbientField u = apply_D(single_mode(disc, disc->basis.offset[1], zeta, -c));
  e.quotient = weighted_integrals(u, p.gamma).quotient();
  const double a1 = alpha(1, p.N);
  e.limit = q1(0.0, a1, p) / q0(0.0, a1, p);
  e.gap = e.quotient - e.limit;
  e.gap_n2 = e.gap * n * n;
  return e;
}

ExtremalEntry extremal_toroidal(int n, const Params& p, const ExtremalOptions& opts) {
  p.validate(3);
  const RadialGrid g = extremal_grid(n, opts);
  const RadialProfile zeta = dilated_bump(g, n);
  const DiscPtr disc = make_discretization(p.N, g, 2);
  const AmbientField u = toroidal_generator(disc, 1, 2, zeta, -p.classical_exponent());
  const ToroidalQuotient q = toroidal_quotient(u, p);
  ExtremalEntry e;
  e.n = n;
  e.quotient = q.value;
  e.limit = c_tor(p);
  e.spectral = e.limit + q.remainder / q.hardy;
  e.gap = e.quotient - e.limit;
  e.gap_n2 = e.gap * n * n;
  return e;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("slope fit needs at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DomainError("log-log fit needs positive data");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ExtremalSequence extremal_sequence(const std::string& kind, const std::vector<int>& ns, const Params& p,
                                   const ExtremalOptions& opts) {
  ExtremalSequence s;
  s.kind = kind;
  s.params = p;
  if (kind != "poloidal" && kind != "toroidal") {
    throw DomainError("extremal kind must be poloidal or toroidal");
  }
  std::vector<double> xs, ys;
  for (int n : ns) {
    const ExtremalEntry e = kind == "poloidal" ? extremal_poloidal(n, p, opts) : extremal_toroidal(n, p, opts);
    s.entries.push_back(e);
    s.limit = e.limit;
    xs.push_back(n);
    ys.push_back(e.gap);
  }
  s.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : std::nan("");
  s.extrapolated_limit = std::nan("");
  if (s.entries.size() >= 2) {
    const ExtremalEntry& a = s.entries[s.entries.size() - 2];
    const ExtremalEntry& b = s.entries.back();
    const double na = sqr(a.n), nb = sqr(b.n);
    if (na != nb) s.extrapolated_limit = (nb * b.quotient - na * a.quotient) / (nb - na);
  }
  return s;
}

} // namespace hleray
