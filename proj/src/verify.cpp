#include "hleray/verify.hpp"

#include "hleray/error.hpp"
#include "hleray/fields.hpp"
#include "hleray/pt.hpp"
#include "hleray/quotient.hpp"
#include "hleray/sphere.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace hleray {

namespace {

constexpr std::size_t kMaxListedFailures = 20;

double score(const CheckRecord& c) {
  if (std::isnan(c.value)) return std::numeric_limits<double>::infinity();
  return c.limit != 0.0 ? c.value / std::abs(c.limit) : c.value;
}

std::string label(const std::string& what, int N, double gamma) {
  std::ostringstream os;
  os << what << " N=" << N << " gamma=" << gamma;
  return os.str();
}

std::string label(const std::string& what, int N) { return what + " N=" + std::to_string(N); }

double rel(double x, double scale) { return scale > 0.0 ? std::abs(x) / scale : std::abs(x); }

// sqrt(int |u|^2 |x|^{-2} dx), the gamma = 0 weighted norm.
double norm0(const AmbientField& u) { return std::sqrt(hardy_integral(u, 0.0)); }

RadialProfile random_profile(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(-3.0, 3.0);
  std::uniform_real_distribution<double> width(2.0, 3.2);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int terms = 1 + static_cast<int>(rng() % 2);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.M);
  for (int i = 0; i < terms; ++i) v += normal(rng) * bump_profile(g, center(rng), width(rng)).values;
  return RadialProfile(g, v);
}

// ---------------------------------------------------------------- suites

void suite_identity(const VerifyConfig& cfg, SuiteResult& s) {
  const IdentityReport r = verify_identity(cfg.identity_Ns, cfg.gamma_min, cfg.gamma_max, cfg.gamma_step,
                                           cfg.identity_tolerance, cfg.perturb);
  for (const IdentityPoint& p : r.points) {
    s.record(label("|cm_orig - c_solenoidal|", p.N, p.gamma), p.discrepancy, cfg.identity_tolerance);
  }
  // Closed-form tau_min against a bracketed minimisation.
  for (int N : cfg.identity_Ns) {
    for (double g = cfg.gamma_min; g <= cfg.gamma_max + 1e-9; g += 0.5) {
      const Params p{N, g};
      const TauMinResult t = tau_min(p);
      auto f = [&](double tau) { return tau + t.a_param / (tau + t.b_param); };
      const auto m = boost::math::tools::brent_find_minima(f, 0.0, 200.0, 60);
      const double numeric = std::min(m.second, f(0.0));
      s.record(label("tau_min vs bracketed minimum", N, g),
               std::abs(numeric - t.value) / std::max(1.0, std::abs(t.value)), 1e-10);
    }
  }
}

void suite_lemmas(const VerifyConfig& cfg, SuiteResult& s) {
  const IdentityReport r = verify_identity(cfg.identity_Ns, cfg.gamma_min, cfg.gamma_max, cfg.gamma_step,
                                           cfg.identity_tolerance);
  for (const IdentityPoint& p : r.points) {
    if (p.N < 3) continue;
    s.record(label("branch order c_pol vs c_tor", p.N, p.gamma), p.branch_order_ok ? 0.0 : 1.0, 0.0);
    if (p.quartic_nonpositive) {
      s.record(label("B(gamma - N/2) <= 0 implies c_tor + 2 <= c_pol", p.N, p.gamma), p.quartic_implication_ok ? 0.0 : 1.0, 0.0);
    }
    if (!p.in_interval) {
      s.record(label("G(0) > 0 outside I_N", p.N, p.gamma), p.correction_positive ? 0.0 : 1.0, 0.0);
    }
    const Params q{p.N, p.gamma};
    s.record(label("G(0) direct vs quartic", p.N, p.gamma),
             std::abs(g_zero(q) - g_zero_quartic(q)) / std::max(1.0, std::abs(g_zero(q))), 1e-12);
    s.record(label("c_solenoidal >= classical", p.N, p.gamma),
             classical_constant(q) - c_solenoidal(q) - 1e-12 * std::max(1.0, classical_constant(q)), 0.0);
  }
}

void suite_interval(const VerifyConfig&, SuiteResult& s) {
  for (int N = 4; N <= 8; ++N) {
    const GammaInterval I = interval_IN(N);
    const std::vector<double> x = branch_crossings(N, I.lower - 5.0, I.upper + 5.0);
    s.record(label("crossing count", N), std::abs(static_cast<double>(x.size()) - 2.0), 0.0);
    if (x.size() == 2) {
      s.record(label("left endpoint", N), std::abs(x[0] - I.lower), 1e-9);
      s.record(label("right endpoint", N), std::abs(x[1] - I.upper), 1e-9);
    }
  }
  const std::vector<double> x = branch_crossings(3, -10.0, 1000.0);
  s.record("N=3 crossing count on [-10, 1000]", std::abs(static_cast<double>(x.size()) - 1.0), 0.0);
  if (!x.empty()) s.record("N=3 left endpoint", std::abs(x[0] - 1.0), 1e-9);
}

void suite_calculus(const VerifyConfig& cfg, SuiteResult& s) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int N : {3, 4, 5}) {
    const int L = 6;
    const SphereGrid grid = build_grid(N, L + 2);
    const HarmonicBasis B = harmonic_basis(N, L, grid);
    for (int b = 0; b < B.offset[L]; ++b) {
      const CommutatorResiduals c = check_commutators(B, grid, b);
      const std::string tag = label("basis element " + std::to_string(b), N);
      s.record("sigma commutator, " + tag, c.sigma_identity, 1e-9);
      s.record("gradient commutator, " + tag, c.gradient_identity, 1e-9);
    }
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd a(B.size());
      for (int i = 0; i < B.size(); ++i) a[i] = normal(rng);
      const Eigen::VectorXd f = B.Y * a;
      const Eigen::MatrixXd G = spherical_gradient(B, grid, f);
      const Eigen::VectorXd lap = laplace_beltrami(B, grid, f);
      const double lhs = grid.integrate(G.rowwise().squaredNorm());
      const double rhs = -grid.integrate(f.cwiseProduct(lap));
      s.record(label("spherical integration by parts", N), std::abs(lhs - rhs) / lhs, 1e-10);
      const double tangential = (G.cwiseProduct(grid.nodes)).rowwise().sum().cwiseAbs().maxCoeff();
      s.record(label("grad_s tangential", N), tangential / f.cwiseAbs().maxCoeff(), 1e-11);
    }
  }
  // Zero spherical mean of toroidal fields.
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, cfg.basis_degree);
    const RadialProfile w = bump_profile(cfg.radial, 0.5, 3.0);
    std::vector<AmbientField> fields;
    for (int i = 1; i <= N; ++i) {
      for (int j = i + 1; j <= N; ++j) fields.push_back(toroidal_generator(disc, i, j, w));
    }
    RandomFieldOptions opts;
    opts.poloidal = false;
    for (int k = 0; k < 5; ++k) fields.push_back(random_solenoidal(disc, cfg.seed + 1000 + k, cfg.L, opts));
    for (const AmbientField& u : fields) {
      s.record(label("toroidal zero spherical mean", N),
               sphere_mean(u).cwiseAbs().maxCoeff() / u.max_abs_stored(), 1e-12);
    }
  }
}

void suite_pt(const VerifyConfig& cfg, SuiteResult& s) {
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, cfg.basis_degree);
    const int M = cfg.radial.M;
    for (int k = 0; k < cfg.random_fields; ++k) {
      const AmbientField u = random_solenoidal(disc, cfg.seed + static_cast<std::uint64_t>(k), cfg.L);
      const std::string tag = label("field " + std::to_string(k), N);
      s.record("divergence of random field, " + tag, u.checks().divergence, 1e-9);
      const PTSplit sp = pt_split(u);
      const double nu = norm0(u);
      s.record("reconstruction, " + tag, rel(norm0(u - sp.u_P - sp.u_T), nu), 1e-8);
      s.record("div u_P, " + tag, sp.u_P.checks().divergence, 1e-8);
      s.record("div u_T, " + tag, sp.u_T.checks().divergence, 1e-8);
      s.record("radial part of u_T, " + tag, sp.u_T.checks().radial_component, 1e-10);
      s.record("spherical divergence of u_T, " + tag, sp.u_T.checks().spherical_divergence, 1e-8);
      for (int q = -2; q <= 2; ++q) {
        const int j = M / 2 + q * M / 16;
        const OrthogonalityResult o = orthogonality_check(sp.u_P, sp.u_T, j);
        // Relative to the local energy of u: where one part is round-off
        // noise the product of the two norms is no scale.
        s.record("L2(S) orthogonality, " + tag, rel(o.l2, o.l2_sum), 1e-9);
        s.record("gradient orthogonality, " + tag, rel(o.gradient, o.gradient_sum), 1e-9);
      }
      const PTSplit pp = pt_split(sp.u_P);
      const PTSplit tt = pt_split(sp.u_T);
      const double nP = norm0(sp.u_P);
      const double nT = norm0(sp.u_T);
      s.record("idempotence u_P -> (u_P, 0), " + tag,
               std::max(rel(norm0(pp.u_P - sp.u_P), nP), rel(norm0(pp.u_T), nP)), 1e-8);
      s.record("idempotence u_T -> (0, u_T), " + tag,
               std::max(rel(norm0(tt.u_P), nT), rel(norm0(tt.u_T - sp.u_T), nT)), 1e-8);
    }
  }
}

void suite_bounds(const VerifyConfig& cfg, SuiteResult& s) {
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, cfg.basis_degree);
    for (int k = 0; k < cfg.random_fields; ++k) {
      const AmbientField u = random_solenoidal(disc, cfg.seed + static_cast<std::uint64_t>(k), cfg.L);
      const SliceProfiles sl = slice_profiles(u);
      for (double g : cfg.field_gammas) {
        const Params p{N, g};
        const double C = c_solenoidal(p);
        const double Q = weighted_integrals(sl, disc->radial, N, g).quotient();
        const std::string tag = label("field " + std::to_string(k) + " quotient vs C", N, g);
        if (C > 0.0) {
          s.record(tag, (C - Q) / C, 1e-6);
        } else {
          s.record(tag, C - Q, 0.0);
        }
      }
    }
  }
}

void suite_strengthened(const VerifyConfig& cfg, SuiteResult& s) {
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, cfg.basis_degree);
    for (int k = 0; k < cfg.random_fields; ++k) {
      const AmbientField u = random_solenoidal(disc, cfg.seed + static_cast<std::uint64_t>(k), cfg.L);
      const PTSplit sp = pt_split(u);
      for (double g : cfg.field_gammas) {
        const Params p{N, g};
        const StrengthenedBranch branch = in_interval(p) ? StrengthenedBranch::Inside : StrengthenedBranch::Outside;
        const StrengthenedReport r = strengthened_check(u, p, branch, &sp);
        const std::string tag = label(std::string(branch == StrengthenedBranch::Inside ? "inside" : "outside") +
                                          " I_N margin, field " + std::to_string(k),
                                      N, g);
        s.record(tag, r.regime_mismatch ? 1.0 : -r.margin / r.dirichlet, 1e-8);
      }
    }
  }
}

void suite_spectral(const VerifyConfig& cfg, SuiteResult& s) {
  std::mt19937_64 rng(cfg.seed + 7);
  std::uniform_real_distribution<double> gamma(-1.0, 2.0);
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, std::max(cfg.basis_degree, 4));
    for (int k = 0; k < cfg.spectral_cases; ++k) {
      const int nu = 1 + static_cast<int>(rng() % 3);
      const Params p{N, gamma(rng)};
      const RadialProfile g = random_profile(cfg.radial, rng);
      const QuotientReport r = mode_quotient(nu, g, p, disc);
      const std::string tag = label("nu=" + std::to_string(nu) + " case " + std::to_string(k), N, p.gamma);
      s.record("spectral vs direct, " + tag, rel(r.spectral_value - r.direct_value, std::abs(r.direct_value)), 1e-5);
      s.record("spectral >= bound, " + tag, -r.gap, 1e-9);
    }
  }
}

void suite_toroidal(const VerifyConfig& cfg, SuiteResult& s) {
  for (int N : cfg.field_Ns) {
    const DiscPtr disc = make_discretization(N, cfg.radial, cfg.basis_degree);
    const RadialProfile w = bump_profile(cfg.radial, -0.5, 3.5);
    RandomFieldOptions opts;
    opts.poloidal = false;
    std::vector<AmbientField> random;
    for (int k = 0; k < 5; ++k) random.push_back(random_solenoidal(disc, cfg.seed + 2000 + k, cfg.L, opts));
    for (double g : cfg.field_gammas) {
      const Params p{N, g};
      for (int i = 1; i <= N; ++i) {
        for (int j = i + 1; j <= N; ++j) {
          const ToroidalQuotient q = toroidal_quotient(toroidal_generator(disc, i, j, w), p);
          s.record(label("eigenmode identity v^(" + std::to_string(i) + "," + std::to_string(j) + ")", N, g),
                   q.residual, 1e-8);
        }
      }
      for (std::size_t k = 0; k < random.size(); ++k) {
        const ToroidalQuotient q = toroidal_quotient(random[k], p);
        s.record(label("D - c_tor H - R >= 0, field " + std::to_string(k), N, g),
                 -(q.dirichlet - c_tor(p) * q.hardy - q.remainder) / q.dirichlet, 1e-8);
      }
    }
  }
  const double ratio = bump_energy_ratio();
  for (int n : {1, 2, 4, 8}) {
    const ExtremalEntry e = extremal_toroidal(n, cfg.toroidal_params);
    s.record("dilated window gap n^2 vs |zeta'|^2/|zeta|^2, n=" + std::to_string(n),
             std::abs(e.gap_n2 / ratio - 1.0), 1e-6);
  }
}

void suite_extremal(const VerifyConfig& cfg, SuiteResult& s) {
  const double ratio = bump_energy_ratio();
  {
    const ExtremalSequence t = extremal_sequence("toroidal", cfg.extremal_ns, cfg.toroidal_params);
    s.record("toroidal slope", std::abs(t.slope + 2.0), 0.05);
    for (const ExtremalEntry& e : t.entries) {
      s.record("toroidal gap n^2, n=" + std::to_string(e.n), std::abs(e.gap_n2 / ratio - 1.0), 1e-4);
    }
  }
  for (const Params& p : cfg.poloidal_params) {
    const ExtremalSequence q = extremal_sequence("poloidal", cfg.extremal_ns, p);
    s.record(label("poloidal slope", p.N, p.gamma), std::abs(q.slope + 2.0), 0.1);
    s.record(label("poloidal extrapolated limit", p.N, p.gamma),
             std::abs(q.extrapolated_limit / q.limit - 1.0), 1e-3);
    double previous = std::numeric_limits<double>::infinity();
    for (const ExtremalEntry& e : q.entries) {
      const std::string tag = label("n=" + std::to_string(e.n), p.N, p.gamma);
      s.record("poloidal quotient above limit, " + tag, -e.gap, 0.0);
      s.record("poloidal quotient decreasing, " + tag, e.quotient - previous, 0.0);
      s.record("poloidal spectral vs direct, " + tag, rel(e.spectral - e.quotient, e.quotient), 1e-5);
      previous = e.quotient;
    }
  }
  bool refused = false;
  try {
    extremal_poloidal(8, Params{4, 3.0});
  } catch (const RegimeError&) {
    refused = true;
  }
  s.record("poloidal sequence refused for N=4 gamma=3", refused ? 0.0 : 1.0, 0.0);
}

using SuiteFn = void (*)(const VerifyConfig&, SuiteResult&);

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table{
      {"identity", suite_identity},         {"lemmas", suite_lemmas},     {"interval", suite_interval},
      {"calculus", suite_calculus},         {"pt", suite_pt},             {"bounds", suite_bounds},
      {"strengthened", suite_strengthened}, {"spectral", suite_spectral}, {"toroidal", suite_toroidal},
      {"extremal", suite_extremal},
  };
  return table;
}

} // namespace

void VerifyConfig::validate() const {
  if (!(gamma_step > 0.0) || !(gamma_min <= gamma_max)) {
    throw DomainError("verify: gamma range needs min <= max and step > 0");
  }
  if (identity_Ns.empty() || field_Ns.empty()) {
    throw DomainError("verify: dimension lists must be nonempty");
  }
  for (int N : identity_Ns) {
    if (N < 2) throw DomainError("verify: identity dimensions must be >= 2");
  }
  for (int N : field_Ns) {
    if (N < 3) throw DomainError("verify: field dimensions must be >= 3");
  }
  if (!(identity_tolerance > 0.0)) {
    throw DomainError("verify: tolerances must be positive");
  }
  if (random_fields < 1 || spectral_cases < 1) {
    throw DomainError("verify: case counts must be positive");
  }
  if (L < 1 || basis_degree < L + 1) {
    throw DomainError("verify: need 1 <= L <= basis_degree - 1");
  }
  if (extremal_ns.size() < 2) {
    throw DomainError("verify: extremal fits need at least two n values");
  }
  radial.validate();
}

void SuiteResult::record(const std::string& what, double value, double limit) {
  CheckRecord c{what, value, limit};
  if (cases == 0 || score(c) > score(worst)) worst = c;
  ++cases;
  if (!c.ok()) {
    ++failed;
    if (failures.size() < kMaxListedFailures) failures.push_back(c);
  }
}

bool VerifySummary::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "lemmas",   "interval", "calculus", "pt",
                                              "bounds",   "strengthened", "spectral", "toroidal", "extremal"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  const auto& table = suite_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw DomainError("unknown verify suite '" + name + "'");
  }
  config.validate();
  SuiteResult s;
  s.name = name;
  const auto start = std::chrono::steady_clock::now();
  it->second(config, s);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

VerifySummary run_verify(const VerifyConfig& config, const std::vector<std::string>& names) {
  VerifySummary out;
  for (const std::string& n : names.empty() ? suite_names() : names) out.suites.push_back(run_suite(n, config));
  return out;
}

nlohmann::ordered_json to_json(const SuiteResult& s) {
  auto check = [](const CheckRecord& c) {
    return nlohmann::ordered_json{{"label", c.label}, {"value", c.value}, {"limit", c.limit}};
  };
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["passed"] = s.passed();
  j["cases"] = s.cases;
  j["failed"] = s.failed;
  j["worst"] = check(s.worst);
  j["failures"] = nlohmann::ordered_json::array();
  for (const CheckRecord& c : s.failures) j["failures"].push_back(check(c));
  return j;
}

nlohmann::ordered_json to_json(const VerifySummary& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["passed"] = s.passed();
  j["suites"] = nlohmann::ordered_json::array();
  for (const SuiteResult& r : s.suites) j["suites"].push_back(to_json(r));
  return j;
}

} // namespace hleray
