#pragma once

// Verification suites behind `hleray verify`: identity sweeps, branch-order checks,
// calculus identities, PT round trips, quotient bounds, strengthened
// inequalities, spectral/direct agreement, toroidal identities and extremal
// decay fits. Every check has the form value <= limit.

#include "hleray/constants.hpp"
#include "hleray/radial.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hleray {

struct VerifyConfig {
  // identity, lemmas
  std::vector<int> identity_Ns{2, 3, 4, 5, 6, 7, 8, 9, 10};
  double gamma_min = -10.0;
  double gamma_max = 10.0;
  double gamma_step = 0.01;
  double identity_tolerance = 1e-12;
  double perturb = 0.0;  ///< added to c_solenoidal in the identity suite (sabotage hook)

  // random-field suites
  std::vector<int> field_Ns{3, 4};
  std::vector<double> field_gammas{-1.0, 0.0, 1.0, 2.0};
  int random_fields = 20;
  std::uint64_t seed = 1;
  int L = 4;
  int basis_degree = 5;
  RadialGrid radial;

  int spectral_cases = 20;  ///< per dimension

  // extremal
  std::vector<int> extremal_ns{8, 16, 32, 64, 128};
  std::vector<Params> poloidal_params{{3, 0.0}, {4, 0.0}, {3, -1.0}};
  Params toroidal_params{3, 0.0};

  void validate() const;
};

struct CheckRecord {
  std::string label;
  double value = 0.0;
  double limit = 0.0;
  bool ok() const { return value <= limit; }
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failed = 0;
  CheckRecord worst;                  ///< largest value / limit seen
  std::vector<CheckRecord> failures;  ///< first few failing checks
  double seconds = 0.0;
  bool passed() const { return failed == 0; }

  void record(const std::string& label, double value, double limit);
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// identity, lemmas, interval, calculus, pt, bounds, strengthened, spectral,
/// toroidal, extremal.
const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown suite name.
SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

/// Runs the named suites (all when `names` is empty) in the listed order.
VerifySummary run_verify(const VerifyConfig& config, const std::vector<std::string>& names = {});

nlohmann::ordered_json to_json(const SuiteResult& s);
nlohmann::ordered_json to_json(const VerifySummary& s);

} // namespace hleray
