#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/allocator.hpp"
#include "wpcn/channel.hpp"

namespace wpcn {

// Which scenario knob a sweep varies.
enum class SweepVariable { p_max_dbm, users_k, sigma_est2, n_t_n_r, n_u };

const char* to_string(SweepVariable v);
std::optional<SweepVariable> sweep_variable_from_string(const std::string& s);

struct SweepSpec {
  SweepVariable variable = SweepVariable::p_max_dbm;
  std::vector<double> values;            // ascending
  int trials = 1;
  std::vector<Scheme> schemes{Scheme::proposed};
  std::vector<Objective> objectives{Objective::max_sum};
  ScenarioConfig base_config;
  SolverOptions solver;                  // shared solver knobs for all runs
  std::uint64_t seed = 1;
};

// One (sweep value, trial, scheme, objective) outcome.  Predicted values
// come from the scheme's own design view; achieved values are the
// throughput the policy guarantees once deployed -- scored under the
// saturating harvester and the worst channels the uncertainty regions
// admit, with over-spent energy budgets scaled back.  The genie scheme
// is scored on the realized channels themselves (no uncertainty).
struct TrialRow {
  double sweep_value = 0.0;
  int trial = 0;
  Scheme scheme = Scheme::proposed;
  Objective objective = Objective::max_sum;
  double sum_predicted = 0.0;
  double min_predicted = 0.0;
  double sum_achieved = 0.0;
  double min_achieved = 0.0;
  double tau0 = 0.0;
  std::vector<double> rates_predicted;
  std::vector<double> rates_achieved;
};

struct TrialTable {
  SweepVariable variable = SweepVariable::p_max_dbm;
  std::vector<TrialRow> rows;
};

// Runs the full sweep.  Per-trial seeds derive from (spec.seed, trial
// index) only, so the same trial index sees identical channels at every
// sweep value and for every scheme: comparisons are paired.  Rows are
// ordered (value, trial, scheme, objective) regardless of thread count.
TrialTable run_sweep(const SweepSpec& spec, int threads = 1);

struct SummaryRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  std::string scheme;
  std::string objective;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(trials)
  int trials = 0;
};

// Mean and standard error per (value, scheme, objective, metric),
// preserving sweep order.  Metrics: sum/min throughput, each in
// achieved and predicted flavors, plus the chosen charging time.
std::vector<SummaryRow> summarize(const TrialTable& table);

// CSV with columns sweep_var,sweep_value,scheme,objective,metric,mean,
// stderr,trials; numbers at 9 significant digits; newline-terminated.
void write_csv(const std::vector<SummaryRow>& rows, const std::string& path);

// Raw per-trial table (one row per TrialRow; per-user rate lists are
// semicolon-joined).
void write_trials_csv(const TrialTable& table, const std::string& path);

}  // namespace wpcn
