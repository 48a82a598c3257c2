// hleray: batch front-end for constants, verification suites, PT
// decomposition of field files, extremal sequences and quotient sweeps.
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error,
// 3 input-field error, 4 regime refusal.

#include "hleray/constants.hpp"
#include "hleray/error.hpp"
#include "hleray/fields.hpp"
#include "hleray/io.hpp"
#include "hleray/parallel.hpp"
#include "hleray/pt.hpp"
#include "hleray/quotient.hpp"
#include "hleray/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hleray::format_double;
using json = nlohmann::ordered_json;

enum Exit : int { kPass = 0, kFail = 1, kConfig = 2, kInput = 3, kRegime = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string config_path;
  std::vector<int> Ns;
  std::vector<double> gammas;
  double gamma_min = -1.0;
  double gamma_max = 2.0;
  double gamma_step = 0.5;
  double t_min = -8.0;
  double t_max = 8.0;
  int M = 1024;
  int resolution = 0;
  int L = 6;
  double tolerance = hleray::kSolenoidalTolerance;
  std::uint64_t seed = 1;
  std::string output;
  std::string format;
  unsigned threads = 0;

  // command specific
  std::vector<std::string> suites;
  double perturb = 0.0;
  int fields = 20;
  std::string kind;
  std::vector<int> ns{8, 16, 32, 64};
  std::vector<int> nus{1, 2, 3};
  double width = 3.0;
  std::string input;
  std::string prefix;
  int degree = 4;

  hleray::RadialGrid radial() const { return {t_min, t_max, M}; }

  // Explicit --gamma list, else the range.
  std::vector<double> gamma_values() const {
    if (!gammas.empty()) return gammas;
    if (!(gamma_step > 0.0) || !(gamma_min <= gamma_max)) {
      throw ConfigError("gamma range needs gamma-min <= gamma-max and gamma-step > 0");
    }
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((gamma_max - gamma_min) / gamma_step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(gamma_min + static_cast<double>(i) * gamma_step);
    return out;
  }
};

// ------------------------------------------------------------------ options

void add_grid_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--t-min", c.t_min, "Radial grid start in t = log r")->capture_default_str();
  sub->add_option("--t-max", c.t_max, "Radial grid end")->capture_default_str();
  sub->add_option("--M", c.M, "Radial grid points")->capture_default_str();
  sub->add_option("--resolution", c.resolution, "Sphere resolution (0 = basis degree + 2)")->capture_default_str();
  sub->add_option("--L", c.L, "Harmonic basis degree")->capture_default_str();
}

void add_common_options(CLI::App* sub, RunConfig& c, const std::string& default_format) {
  sub->add_option("--config", c.config_path, "JSON file with option values (flags take precedence)");
  sub->add_option("-o,--output", c.output, "Output path (default stdout)");
  sub->add_option("--format", c.format, "json or csv (default " + default_format + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
}

// Values from --config for options not given on the command line.
void apply_config_file(CLI::App* sub, const RunConfig& c) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw ConfigError("cannot open config file " + c.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + c.config_path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  auto to_string = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw ConfigError("config values must be scalars or arrays of scalars");
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "config" || key == "schema_version") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("config file: unknown option '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    std::vector<std::string> values;
    if (value.is_array()) {
      for (const auto& v : value) values.push_back(to_string(v));
    } else {
      values.push_back(to_string(value));
    }
    try {
      opt->add_result(values);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config file: option '" + key + "': " + e.what());
    }
  }
}

// ------------------------------------------------------------------ output

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw ConfigError("cannot write " + c.output);
  out << text;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s = hleray::csv_row(header) + "\n";
  for (const auto& r : rows) s += hleray::csv_row(r) + "\n";
  return s;
}

std::string b(bool x) { return x ? "true" : "false"; }

// ------------------------------------------------------------------ commands

json constant_json(const hleray::ConstantReport& r) {
  json j;
  j["N"] = r.N;
  j["gamma"] = r.gamma;
  j["classical"] = r.classical;
  j["c_pol"] = r.c_pol;
  j["c_tor"] = r.c_tor;
  j["c_axis"] = r.c_axis;
  j["c_solenoidal"] = r.c_solenoidal;
  j["cm_orig"] = r.cm_orig;
  j["in_interval"] = r.in_interval;
  j["interval"] = {r.interval.lower, r.interval.upper};
  j["interval_wraps"] = r.interval.wraps;
  j["tau_star"] = r.tau_star;
  j["correction_c"] = r.correction_c;
  j["g_zero"] = r.g_zero;
  j["quartic_b"] = r.quartic_b;
  return j;
}

int cmd_constants(const RunConfig& c) {
  const std::vector<int> Ns = c.Ns.empty() ? std::vector<int>{3} : c.Ns;
  std::vector<hleray::Params> points;
  for (int N : Ns) {
    for (double g : c.gamma_values()) {
      hleray::Params p{N, g};
      p.validate(2);
      points.push_back(p);
    }
  }
  const auto reports = hleray::parallel_map(points, [](const hleray::Params& p) { return hleray::constant_report(p); },
                                            c.threads);
  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      rows.push_back({std::to_string(r.N), format_double(r.gamma), format_double(r.classical),
                      format_double(r.c_pol), format_double(r.c_tor), format_double(r.c_axis),
                      format_double(r.c_solenoidal), format_double(r.cm_orig), b(r.in_interval),
                      format_double(r.interval.lower), format_double(r.interval.upper), format_double(r.tau_star),
                      format_double(r.correction_c), format_double(r.g_zero), format_double(r.quartic_b)});
    }
    emit(c, csv_text({"N", "gamma", "classical", "c_pol", "c_tor", "c_axis", "c_solenoidal", "cm_orig",
                      "in_interval", "interval_lower", "interval_upper", "tau_star", "correction_c", "g_zero",
                      "quartic_b"},
                     rows));
    return kPass;
  }
  json j;
  j["schema_version"] = 1;
  j["command"] = "constants";
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(constant_json(r));
  emit(c, hleray::dump_json(j) + "\n");
  return kPass;
}

int cmd_verify(const RunConfig& c, const CLI::App* sub) {
  hleray::VerifyConfig v;
  v.seed = c.seed;
  v.perturb = c.perturb;
  v.random_fields = c.fields;
  v.radial = c.radial();
  if (!c.Ns.empty()) {
    v.identity_Ns = c.Ns;
    v.field_Ns.clear();
    for (int N : c.Ns) {
      if (N >= 3) v.field_Ns.push_back(N);
    }
    if (v.field_Ns.empty()) v.field_Ns = {3};
  }
  if (sub->count("--gamma") > 0 || !c.gammas.empty()) {
    v.field_gammas = c.gammas;
    if (v.field_Ns.size() == 1 && v.field_gammas.size() == 1) {
      v.toroidal_params = {v.field_Ns.front(), v.field_gammas.front()};
    }
  }
  if (sub->count("--gamma-min") + sub->count("--gamma-max") + sub->count("--gamma-step") > 0) {
    v.gamma_min = c.gamma_min;
    v.gamma_max = c.gamma_max;
    v.gamma_step = c.gamma_step;
  }
  if (sub->count("--L") > 0) v.basis_degree = c.L;
  try {
    v.validate();
  } catch (const hleray::DomainError& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::string> names;
  for (const auto& s : c.suites) {
    if (std::find(hleray::suite_names().begin(), hleray::suite_names().end(), s) == hleray::suite_names().end()) {
      throw ConfigError("unknown suite '" + s + "'");
    }
    names.push_back(s);
  }
  const hleray::VerifySummary summary = hleray::run_verify(v, names);
  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : summary.suites) {
      rows.push_back({s.name, b(s.passed()), std::to_string(s.cases), std::to_string(s.failed),
                      "\"" + s.worst.label + "\"", format_double(s.worst.value), format_double(s.worst.limit)});
    }
    emit(c, csv_text({"suite", "passed", "cases", "failed", "worst_label", "worst_value", "worst_limit"}, rows));
  } else {
    emit(c, hleray::dump_json(hleray::to_json(summary)) + "\n");
  }
  for (const auto& s : summary.suites) {
    if (!s.passed()) {
      std::cerr << "suite " << s.name << " failed " << s.failed << " of " << s.cases << " checks";
      if (!s.failures.empty()) {
        std::cerr << "; first: " << s.failures.front().label << " = " << format_double(s.failures.front().value)
                  << " (limit " << format_double(s.failures.front().limit) << ")";
      }
      std::cerr << "\n";
    }
  }
  return summary.passed() ? kPass : kFail;
}

// Energy of component harmonics of degree nu: int |P_nu u|^2 |x|^{2 gamma - 2} dx.
std::vector<double> degree_energies(const hleray::AmbientField& u, double gamma) {
  const hleray::Discretization& d = *u.disc;
  std::vector<double> out(static_cast<std::size_t>(d.basis_degree()) + 1, 0.0);
  for (int nu = 0; nu <= d.basis_degree(); ++nu) {
    hleray::AmbientField part = hleray::AmbientField::zero(u.disc, u.radial_power);
    for (int k = 0; k < u.N(); ++k) {
      part.modes[k].middleCols(d.basis.offset[nu], d.basis.dim(nu)) =
          u.modes[k].middleCols(d.basis.offset[nu], d.basis.dim(nu));
    }
    out[static_cast<std::size_t>(nu)] = hleray::hardy_integral(part, gamma);
  }
  return out;
}

int cmd_decompose(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("decompose needs --input");
  std::ifstream in(c.input);
  if (!in) throw hleray::FormatError("cannot open field file " + c.input);
  const hleray::ImportedField imported = hleray::read_field(in, c.tolerance);
  const hleray::AmbientField& u = imported.field;
  const double gamma = c.gammas.empty() ? 0.0 : c.gammas.front();

  const hleray::FieldChecks& checks = u.checks();
  if (checks.divergence > c.tolerance) {
    throw hleray::FieldError("input field is not solenoidal: relative divergence norm " +
                             format_double(checks.divergence) + " exceeds " + format_double(c.tolerance));
  }
  const hleray::PTSplit split = hleray::pt_split(u, c.tolerance);

  std::string prefix = c.prefix;
  if (prefix.empty()) {
    std::filesystem::path p(c.input);
    prefix = (p.parent_path() / p.stem()).string();
  }
  for (const auto& [suffix, field] : {std::pair{"_P.field", &split.u_P}, std::pair{"_T.field", &split.u_T}}) {
    std::ofstream out(prefix + suffix);
    if (!out) throw ConfigError("cannot write " + prefix + suffix);
    hleray::write_field(out, *field);
  }

  const double total = hleray::hardy_integral(u, gamma);
  const double eP = hleray::hardy_integral(split.u_P, gamma);
  const double eT = hleray::hardy_integral(split.u_T, gamma);
  const double recon = hleray::hardy_integral(u - split.u_P - split.u_T, gamma);
  const auto table_u = degree_energies(u, gamma);
  const auto table_P = degree_energies(split.u_P, gamma);
  const auto table_T = degree_energies(split.u_T, gamma);

  json j;
  j["schema_version"] = 1;
  j["command"] = "decompose";
  j["input"] = c.input;
  j["outputs"] = {prefix + "_P.field", prefix + "_T.field"};
  j["N"] = u.N();
  j["gamma"] = gamma;
  j["projection_residual"] = imported.projection_residual;
  j["norms"] = {{"u", std::sqrt(total)}, {"u_P", std::sqrt(eP)}, {"u_T", std::sqrt(eT)}};
  j["energies"] = {{"total", total},
                   {"poloidal", eP},
                   {"toroidal", eT},
                   {"sum_relative_error", total > 0.0 ? std::abs(eP + eT - total) / total : 0.0}};
  j["residuals"] = {{"reconstruction", total > 0.0 ? std::sqrt(recon / total) : 0.0},
                    {"divergence", checks.divergence},
                    {"divergence_u_P", split.u_P.checks().divergence},
                    {"divergence_u_T", split.u_T.checks().divergence},
                    {"radial_part_u_T", split.u_T.checks().radial_component},
                    {"spherical_divergence_u_T", split.u_T.checks().spherical_divergence}};
  j["modes"] = json::array();
  for (std::size_t nu = 0; nu < table_u.size(); ++nu) {
    j["modes"].push_back({{"nu", nu}, {"total", table_u[nu]}, {"poloidal", table_P[nu]}, {"toroidal", table_T[nu]}});
  }
  emit(c, hleray::dump_json(j) + "\n");
  return kPass;
}

int cmd_extremal(const RunConfig& c) {
  if (c.kind != "poloidal" && c.kind != "toroidal") throw ConfigError("--kind must be poloidal or toroidal");
  if (c.ns.size() < 2) throw ConfigError("--n needs at least two values for the slope fit");
  for (int n : c.ns) {
    if (n < 1) throw ConfigError("--n values must be positive");
  }
  const hleray::Params p{c.Ns.empty() ? 3 : c.Ns.front(), c.gammas.empty() ? 0.0 : c.gammas.front()};
  try {
    p.validate(3);
  } catch (const hleray::DomainError& e) {
    throw ConfigError(e.what());
  }
  hleray::ExtremalOptions opts;
  opts.M = c.M;
  const hleray::ExtremalSequence seq = hleray::extremal_sequence(c.kind, c.ns, p, opts);
  const auto& entries = seq.entries;
  const double slope = seq.slope;
  const double extrapolated = seq.extrapolated_limit;

  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : entries) {
      rows.push_back({std::to_string(e.n), format_double(e.quotient), format_double(e.spectral),
                      format_double(e.limit), format_double(e.gap), format_double(e.gap_n2), format_double(slope),
                      format_double(extrapolated)});
    }
    emit(c, csv_text({"n", "quotient", "spectral", "limit", "gap", "gap_n2", "slope", "extrapolated_limit"}, rows));
  } else {
    json j;
    j["schema_version"] = 1;
    j["command"] = "extremal";
    j["kind"] = c.kind;
    j["N"] = p.N;
    j["gamma"] = p.gamma;
    j["limit"] = seq.limit;
    j["slope"] = slope;
    j["extrapolated_limit"] = extrapolated;
    j["entries"] = json::array();
    for (const auto& e : entries) {
      j["entries"].push_back({{"n", e.n},
                              {"quotient", e.quotient},
                              {"spectral", e.spectral},
                              {"gap", e.gap},
                              {"gap_n2", e.gap_n2}});
    }
    emit(c, hleray::dump_json(j) + "\n");
  }
  return kPass;
}

int cmd_sweep(const RunConfig& c) {
  const std::vector<int> Ns = c.Ns.empty() ? std::vector<int>{3, 4} : c.Ns;
  const hleray::RadialGrid g = c.radial();
  int max_nu = 1;
  for (int nu : c.nus) {
    if (nu < 1) throw ConfigError("--nu values must be >= 1");
    max_nu = std::max(max_nu, nu);
  }
  const hleray::RadialProfile profile = hleray::bump_profile(g, 0.0, c.width);
  std::map<int, hleray::DiscPtr> discs;
  for (int N : Ns) {
    if (N < 3) throw ConfigError("sweep needs N >= 3");
    discs[N] = hleray::make_discretization(N, g, max_nu + 1, c.resolution);
  }
  struct Point {
    int N;
    double gamma;
    int nu;
  };
  std::vector<Point> points;
  for (int N : Ns) {
    for (double gm : c.gamma_values()) {
      for (int nu : c.nus) points.push_back({N, gm, nu});
    }
  }
  const auto reports = hleray::parallel_map(
      points,
      [&](const Point& q) { return hleray::mode_quotient(q.nu, profile, hleray::Params{q.N, q.gamma}, discs.at(q.N)); },
      c.threads);
  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      rows.push_back({std::to_string(r.N), format_double(r.gamma), std::to_string(r.nu), std::to_string(r.n),
                      format_double(r.spectral_value), format_double(r.direct_value), format_double(r.bound),
                      format_double(r.gap)});
    }
    emit(c, csv_text({"N", "gamma", "nu", "n", "spectral_value", "direct_value", "bound", "gap"}, rows));
  } else {
    json j;
    j["schema_version"] = 1;
    j["command"] = "sweep";
    j["reports"] = json::array();
    for (const auto& r : reports) {
      j["reports"].push_back({{"N", r.N},
                              {"gamma", r.gamma},
                              {"nu", r.nu},
                              {"n", r.n},
                              {"spectral_value", r.spectral_value},
                              {"direct_value", r.direct_value},
                              {"bound", r.bound},
                              {"gap", r.gap}});
    }
    emit(c, hleray::dump_json(j) + "\n");
  }
  return kPass;
}

int cmd_field(const RunConfig& c) {
  const int N = c.Ns.empty() ? 3 : c.Ns.front();
  const hleray::RadialGrid g = c.radial();
  hleray::DiscPtr disc;
  try {
    disc = hleray::make_discretization(N, g, c.L, c.resolution);
  } catch (const hleray::Error& e) {
    throw ConfigError(e.what());
  }
  const hleray::RadialProfile w = hleray::bump_profile(g, 0.0, c.width);
  hleray::AmbientField u;
  hleray::RandomFieldOptions opts;
  if (c.kind == "toroidal") {
    u = hleray::toroidal_generator(disc, 1, 2, w);
  } else if (c.kind == "poloidal") {
    opts.toroidal = false;
    u = hleray::random_solenoidal(disc, c.seed, c.degree, opts);
  } else if (c.kind == "mixed") {
    u = hleray::random_solenoidal(disc, c.seed, c.degree, opts);
  } else if (c.kind == "radial") {
    u = hleray::radial_field(disc, w);
  } else {
    throw ConfigError("--kind must be toroidal, poloidal, mixed or radial");
  }
  std::ostringstream os;
  hleray::write_field(os, u);
  emit(c, os.str());
  return kPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp Hardy-Leray constants for solenoidal fields: constants, verification, "
               "poloidal-toroidal decomposition, extremal sequences."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hleray 0.1.0");
  RunConfig cfg;

  auto* constants = app.add_subcommand("constants", "Closed-form constants per (N, gamma)");
  add_common_options(constants, cfg, "json");
  constants->add_option("--N", cfg.Ns, "Dimensions")->delimiter(',');
  constants->add_option("--gamma", cfg.gammas, "Explicit gamma values")->delimiter(',');
  constants->add_option("--gamma-min", cfg.gamma_min)->capture_default_str();
  constants->add_option("--gamma-max", cfg.gamma_max)->capture_default_str();
  constants->add_option("--gamma-step", cfg.gamma_step)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the verification suites; exit 1 on any failure");
  add_common_options(verify, cfg, "json");
  add_grid_options(verify, cfg);
  verify->add_option("--suite", cfg.suites, "Suites to run (default all)")->delimiter(',');
  verify->add_option("--N", cfg.Ns, "Dimensions")->delimiter(',');
  verify->add_option("--gamma", cfg.gammas, "Weight exponents for the field suites")->delimiter(',');
  verify->add_option("--gamma-min", cfg.gamma_min, "Identity sweep start");
  verify->add_option("--gamma-max", cfg.gamma_max, "Identity sweep end");
  verify->add_option("--gamma-step", cfg.gamma_step, "Identity sweep step");
  verify->add_option("--seed", cfg.seed)->capture_default_str();
  verify->add_option("--fields", cfg.fields, "Random solenoidal fields per dimension")->capture_default_str();
  verify->add_option("--perturb", cfg.perturb, "Added to c_solenoidal in the identity suite (test hook)");

  auto* decompose = app.add_subcommand("decompose", "Poloidal-toroidal split of a field file");
  add_common_options(decompose, cfg, "json");
  decompose->add_option("-i,--input", cfg.input, "Field file")->required();
  decompose->add_option("--prefix", cfg.prefix, "Prefix for the _P.field and _T.field outputs");
  decompose->add_option("--gamma", cfg.gammas, "Weight exponent for the energy table")->delimiter(',');
  decompose->add_option("--tolerance", cfg.tolerance, "Solenoidality and projection tolerance")
      ->capture_default_str();

  auto* extremal = app.add_subcommand("extremal", "Extremal sequence table and log-log decay slope");
  add_common_options(extremal, cfg, "csv");
  extremal->add_option("--kind", cfg.kind, "poloidal or toroidal")->required();
  extremal->add_option("--N", cfg.Ns, "Dimension")->delimiter(',');
  extremal->add_option("--gamma", cfg.gammas, "Weight exponent")->delimiter(',');
  extremal->add_option("--n", cfg.ns, "Dilation indices")->delimiter(',');
  extremal->add_option("--M", cfg.M, "Radial grid points per sequence entry")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Spectral vs direct mode quotients over (N, gamma, nu)");
  add_common_options(sweep, cfg, "csv");
  add_grid_options(sweep, cfg);
  sweep->add_option("--N", cfg.Ns, "Dimensions")->delimiter(',');
  sweep->add_option("--gamma", cfg.gammas, "Explicit gamma values")->delimiter(',');
  sweep->add_option("--gamma-min", cfg.gamma_min)->capture_default_str();
  sweep->add_option("--gamma-max", cfg.gamma_max)->capture_default_str();
  sweep->add_option("--gamma-step", cfg.gamma_step)->capture_default_str();
  sweep->add_option("--nu", cfg.nus, "Harmonic degrees")->delimiter(',');
  sweep->add_option("--width", cfg.width, "Half-width of the bump profile in t")->capture_default_str();

  auto* field = app.add_subcommand("field", "Write a sample field file");
  add_common_options(field, cfg, "json");
  add_grid_options(field, cfg);
  field->add_option("--kind", cfg.kind, "toroidal, poloidal, mixed or radial")->required();
  field->add_option("--N", cfg.Ns, "Dimension")->delimiter(',');
  field->add_option("--seed", cfg.seed)->capture_default_str();
  field->add_option("--degree", cfg.degree, "Degree of random potentials")->capture_default_str();
  field->add_option("--width", cfg.width, "Half-width of the window in t")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config_file(sub, cfg);
    if (cfg.format.empty()) cfg.format = (sub == extremal || sub == sweep) ? "csv" : "json";
    if (sub == constants) return cmd_constants(cfg);
    if (sub == verify) return cmd_verify(cfg, sub);
    if (sub == decompose) return cmd_decompose(cfg);
    if (sub == extremal) return cmd_extremal(cfg);
    if (sub == sweep) return cmd_sweep(cfg);
    if (sub == field) return cmd_field(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const hleray::RegimeError& e) {
    std::cerr << "regime refusal: " << e.what() << "\n";
    return kRegime;
  } catch (const hleray::FormatError& e) {
    std::cerr << "input field error: " << e.what() << "\n";
    return kInput;
  } catch (const hleray::FieldError& e) {
    std::cerr << "input field error: " << e.what() << "\n";
    return kInput;
  } catch (const hleray::SupportError& e) {
    std::cerr << "input field error: " << e.what() << "\n";
    return kInput;
  } catch (const hleray::TruncationError& e) {
    std::cerr << (sub == decompose ? "input field error: " : "configuration error: ") << e.what() << "\n";
    return sub == decompose ? kInput : kConfig;
  } catch (const hleray::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const hleray::OverflowError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const CLI::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kConfig;
}
