#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpcn/allocator.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/simulator.hpp"

namespace wpcn {

// A solve-job description: one scenario draw plus solver knobs.
struct SolveJobConfig {
  ScenarioConfig scenario;
  SolverOptions solver;
  std::uint64_t seed = 1;
};

// Loaders accept `key=value` override strings (dotted JSON paths, values
// parsed as JSON scalars/arrays); overrides beat file contents.  All
// validation failures throw ConfigError with the offending key.
SolveJobConfig load_solve_config(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
SolveJobConfig solve_config_from_text(const std::string& json_text,
                                      const std::vector<std::string>& overrides = {});

SweepSpec load_sweep_spec(const std::string& path,
                          const std::vector<std::string>& overrides = {});
SweepSpec sweep_spec_from_text(const std::string& json_text,
                               const std::vector<std::string>& overrides = {});

// Serialized solve outcome (objective, times, powers, rates, residuals,
// diagnostics) for the CLI and downstream tooling.
std::string report_to_json_string(const SolveReport& report, Objective objective,
                                  Scheme scheme, int indent = 2);

}  // namespace wpcn
