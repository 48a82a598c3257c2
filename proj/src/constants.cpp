#include "hleray/constants.hpp"

#include "hleray/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

namespace hleray {

namespace {

double sqr(double x) { return x * x; }

// Tie-break tolerance at the interval endpoints is exact comparison; the two
// branches agree there analytically.
double toroidal_branch(const Params& p) { return classical_constant(p) + (p.N - 1); }

double outer_branch(const Params& p) {
  const double l2 = sqr(p.shifted());
  return classical_constant(p) * (l2 + p.N + 1) / (l2 + p.N - 1);
}

} // namespace

void Params::validate(int min_N) const {
  if (N < min_N) {
    throw DomainError("dimension N=" + std::to_string(N) + " below minimum " +
                      std::to_string(min_N));
  }
  if (!std::isfinite(gamma)) {
    throw DomainError("gamma must be finite");
  }
}

bool GammaInterval::contains(double g) const {
  if (wraps) {
    return g > lower || g < upper;
  }
  return g > lower && g < upper;
}

double alpha(int nu, int N) {
  if (nu < 0 || N < 2) {
    throw DomainError("alpha requires nu >= 0 and N >= 2");
  }
  return static_cast<double>(nu) * static_cast<double>(nu + N - 2);
}

TauMinResult tau_min(const Params& p) {
  p.validate(2);
  TauMinResult r;
  r.a_param = 4.0 * (p.N - 1) * (p.gamma - 1.0);
  r.b_param = sqr(p.shifted()) + p.N - 1;
  const double A = r.a_param;
  const double B = r.b_param;
  if (A <= B * B) {
    r.tau_star = 0.0;
    r.value = A / B;
  } else {
    const double s = std::sqrt(A);
    r.tau_star = s - B;
    r.value = 2.0 * s - B;
  }
  return r;
}

GammaInterval gamma_interval(int N) {
  if (N < 2) {
    throw DomainError("gamma_interval requires N >= 2");
  }
  GammaInterval I;
  const double root = std::sqrt(static_cast<double>(N + 1));
  I.lower = 0.5 * N - (N - 1) / (root + 2.0);
  if (N == 3) {
    I.upper = std::numeric_limits<double>::infinity();
  } else {
    I.upper = 0.5 * N + (N - 1) / (root - 2.0);
  }
  I.wraps = (N == 2);
  return I;
}

GammaInterval interval_IN(int N) {
  if (N < 3) {
    throw DomainError("interval_IN requires N >= 3");
  }
  return gamma_interval(N);
}

bool in_interval(const Params& p) {
  p.validate(2);
  return gamma_interval(p.N).contains(p.gamma);
}

double classical_constant(const Params& p) { return sqr(p.classical_exponent()); }

double c_pol(const Params& p) { return classical_constant(p) + 2.0 + tau_min(p).value; }

double c_tor(const Params& p) {
  p.validate(2);
  return toroidal_branch(p);
}

double c_axis(const Params& p) {
  p.validate(2);
  if (p.N >= 4) {
    return c_pol(p);
  }
  return c_solenoidal(p);
}

double cm_orig(const Params& p) {
  return classical_constant(p) + std::min(static_cast<double>(p.N - 1), 2.0 + tau_min(p).value);
}

double c_solenoidal(const Params& p) {
  p.validate(2);
  return in_interval(p) ? toroidal_branch(p) : outer_branch(p);
}

double quartic_B(double lambda, int N) {
  const double l2 = lambda * lambda;
  return l2 * l2 + (N - 1) * (2.0 * l2 - 4.0 * lambda - N + 3);
}

double g_of_tau(double tau, const Params& p) {
  p.validate(2);
  const double B = sqr(p.shifted()) + p.N - 1;
  return 1.0 - 4.0 * (p.gamma - 1.0) * (p.N - 1) / ((tau + B) * B);
}

double g_zero(const Params& p) { return g_of_tau(0.0, p); }

double g_zero_quartic(const Params& p) {
  p.validate(2);
  const double B = sqr(p.shifted()) + p.N - 1;
  return quartic_B(p.shifted(), p.N) / (B * B);
}

double correction_c(const Params& p) { return std::max(0.0, std::min(1.0, g_zero(p))); }

ConstantReport constant_report(const Params& p) {
  p.validate(2);
  ConstantReport r;
  r.N = p.N;
  r.gamma = p.gamma;
  r.classical = classical_constant(p);
  r.c_pol = c_pol(p);
  r.c_tor = c_tor(p);
  r.c_axis = c_axis(p);
  r.c_solenoidal = c_solenoidal(p);
  r.cm_orig = cm_orig(p);
  r.interval = gamma_interval(p.N);
  r.in_interval = r.interval.contains(p.gamma);
  r.tau_star = tau_min(p).tau_star;
  r.correction_c = correction_c(p);
  r.g_zero = g_zero(p);
  r.quartic_b = quartic_B(p.shifted(), p.N);
  return r;
}

IdentityReport verify_identity(std::span<const int> Ns, double gamma_min, double gamma_max,
                               double step, double tolerance, double perturb) {
  if (!(step > 0.0) || !(gamma_max >= gamma_min)) {
    throw DomainError("verify_identity: empty gamma range or non-positive step");
  }
  IdentityReport rep;
  const auto count = static_cast<std::int64_t>(std::floor((gamma_max - gamma_min) / step + 1e-9)) + 1;
  rep.points.reserve(Ns.size() * static_cast<std::size_t>(count));
  for (int N : Ns) {
    for (std::int64_t i = 0; i < count; ++i) {
      const Params p{N, gamma_min + static_cast<double>(i) * step};
      IdentityPoint pt;
      pt.N = N;
      pt.gamma = p.gamma;
      const double sol = c_solenoidal(p) + perturb;
      const double orig = cm_orig(p);
      const double scale = std::max(1.0, std::abs(sol));
      pt.discrepancy = std::abs(orig - sol);
      pt.within_tolerance = pt.discrepancy <= tolerance * scale;

      const double cp = c_pol(p);
      const double ct = c_tor(p);
      const double branch_tol = tolerance * std::max(1.0, std::abs(ct));
      pt.in_interval = in_interval(p);
      if (pt.in_interval) {
        pt.branch_order_ok = cp > ct;
      } else {
        pt.branch_order_ok = (ct >= cp - branch_tol) && std::abs(cp - outer_branch(p)) <= branch_tol;
        pt.correction_positive = g_zero(p) > 0.0 && correction_c(p) > 0.0;
      }
      pt.quartic_nonpositive = quartic_B(p.shifted(), N) <= 0.0;
      if (pt.quartic_nonpositive) {
        pt.quartic_implication_ok = ct + 2.0 <= cp + branch_tol;
      }

      if (pt.discrepancy > rep.max_discrepancy || rep.argmax_N == 0) {
        rep.max_discrepancy = std::max(rep.max_discrepancy, pt.discrepancy);
        if (pt.discrepancy >= rep.max_discrepancy) {
          rep.argmax_N = N;
          rep.argmax_gamma = p.gamma;
        }
      }
      if (!(pt.within_tolerance && pt.branch_order_ok && pt.quartic_implication_ok && pt.correction_positive)) {
        ++rep.violations;
      }
      rep.points.push_back(pt);
    }
  }
  return rep;
}

std::vector<double> branch_crossings(int N, double lo, double hi, double scan_step) {
  if (!(hi > lo) || !(scan_step > 0.0)) {
    throw DomainError("branch_crossings: empty range");
  }
  auto diff = [N](double g) {
    const Params p{N, g};
    return c_pol(p) - c_tor(p);
  };
  std::vector<double> roots;
  const auto steps = static_cast<std::int64_t>(std::ceil((hi - lo) / scan_step));
  double a = lo;
  double fa = diff(a);
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double b = std::min(hi, lo + static_cast<double>(i) * scan_step);
    const double fb = diff(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      std::uintmax_t iters = 200;
      auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); };
      const auto [r0, r1] = boost::math::tools::toms748_solve(diff, a, b, fa, fb, tol, iters);
      roots.push_back(0.5 * (r0 + r1));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

} // namespace hleray
