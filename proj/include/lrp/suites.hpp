#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace lrp {

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::ordered_json detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::vector<CheckResult> checks;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  /// Fraction of the full replicate counts; 1 runs the full-size checks.
  double scale = 1.0;
};

/// theta, medians, tails, paths, hops, scaling, coupling, axioms, oracle,
/// sampler, fidelity.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite; throws InvalidArgument for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

}  // namespace lrp
