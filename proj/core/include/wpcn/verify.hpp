#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"

namespace wpcn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // filled on failure (or informative on pass)
};

// Named smoke-scale invariant suites, runnable without any test
// framework: "eh" (harvester curve identities), "waterfill" (grid
// oracle), "worst_case" (sampling oracle + witness), "s_procedure"
// (certificate cross-check), "kkt" (solver optimality residuals), or
// "all".  Unknown suite names throw ConfigError.
std::vector<CheckResult> run_verification_suite(const std::string& suite,
                                                const ScenarioConfig& config,
                                                std::uint64_t seed);

// Names accepted by run_verification_suite, excluding "all".
std::vector<std::string> verification_suite_names();

}  // namespace wpcn
