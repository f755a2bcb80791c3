#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hermite_obs {

struct VerdictRecord {
  std::string suite;
  std::string module;
  int trials = 0;
  int failures = 0;
  int inconclusive = 0;
  double worst_margin = 0;  // smallest slack seen; negative on failure
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct SuiteInfo {
  std::string name;
  std::string module;
  int trials;
};

const std::vector<SuiteInfo>& verify_suites();

// `selector` is "all", a module name or a suite name.  Trial i of a suite
// draws from a generator seeded by (seed, suite, i) only.
std::vector<VerdictRecord> run_verify(const std::string& selector, std::uint64_t seed, double trial_scale = 1.0);

// Stateless mixing of (seed, suite name, trial index).
std::uint64_t derive_seed(std::uint64_t master, const std::string& suite, std::uint64_t trial);

}  // namespace hermite_obs
