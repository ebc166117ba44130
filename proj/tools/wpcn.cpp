// Command-line front end: solve one instance, run a Monte-Carlo sweep,
// verify solver invariants, or plot a sweep summary.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/config.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/plot.hpp"
#include "wpcn/simulator.hpp"
#include "wpcn/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("WPCN_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw wpcn::ConfigError("WPCN_SEED must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

int run_solve(const std::string& config_path,
              const std::vector<std::string>& overrides) {
  wpcn::SolveJobConfig cfg = wpcn::load_solve_config(config_path, overrides);
  if (const auto env_seed = seed_from_environment()) cfg.seed = *env_seed;

  const wpcn::Scenario scenario = wpcn::generate_scenario(cfg.scenario, cfg.seed);
  const wpcn::SolveReport report = wpcn::solve(scenario, cfg.solver);
  std::cout << wpcn::report_to_json_string(report, cfg.solver.objective,
                                           cfg.solver.scheme)
            << "\n";
  return kExitOk;
}

int run_sweep(const std::string& spec_path, const std::string& out_dir,
              int threads, const std::vector<std::string>& overrides) {
  wpcn::SweepSpec spec = wpcn::load_sweep_spec(spec_path, overrides);
  if (const auto env_seed = seed_from_environment()) spec.seed = *env_seed;

  std::filesystem::create_directories(out_dir);
  const wpcn::TrialTable table = wpcn::run_sweep(spec, threads);
  const auto summary = wpcn::summarize(table);

  const std::string summary_path = (std::filesystem::path(out_dir) / "summary.csv").string();
  const std::string trials_path = (std::filesystem::path(out_dir) / "trials.csv").string();
  wpcn::write_csv(summary, summary_path);
  wpcn::write_trials_csv(table, trials_path);
  std::cout << "wrote " << summary_path << " and " << trials_path << "\n";
  return kExitOk;
}

int run_verify(const std::string& suite, const std::string& config_path,
               const std::vector<std::string>& overrides) {
  wpcn::ScenarioConfig config;
  std::uint64_t seed = 1;
  if (!config_path.empty()) {
    wpcn::SolveJobConfig cfg = wpcn::load_solve_config(config_path, overrides);
    config = cfg.scenario;
    seed = cfg.seed;
  }
  if (const auto env_seed = seed_from_environment()) seed = *env_seed;

  const auto results = wpcn::run_verification_suite(suite, config, seed);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass && !r.detail.empty()) std::cout << " — " << r.detail;
    std::cout << "\n";
    failures += r.pass ? 0 : 1;
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? kExitOk : kExitVerifyFailed;
}

int run_plot(const std::string& summary_path, const std::string& metric,
             const std::string& out_path, const std::string& objective) {
  wpcn::render_summary_plot(summary_path, metric, out_path, objective);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust WPCN resource-allocation solver and simulator"};
  app.require_subcommand(1);

  std::string config_path, spec_path, out_dir, suite = "all";
  std::string summary_path, metric, plot_out, objective_filter;
  std::vector<std::string> overrides;
  int threads = 1;

  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario and print the report as JSON");
  solve_cmd->add_option("--config", config_path, "Scenario/solver JSON config")->required();
  solve_cmd->add_option("--set", overrides, "Override config values (key.path=value)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write CSV outputs");
  sweep_cmd->add_option("--spec", spec_path, "Sweep spec JSON")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--threads", threads, "Worker thread count")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--set", overrides, "Override spec values (key.path=value)");

  auto* verify_cmd = app.add_subcommand("verify", "Run invariant/oracle suites");
  verify_cmd->add_option("--suite", suite, "Suite name (eh, waterfill, worst_case, s_procedure, kkt, all)");
  verify_cmd->add_option("--config", config_path, "Optional scenario config for solver-based suites");
  verify_cmd->add_option("--set", overrides, "Override config values (key.path=value)");

  auto* plot_cmd = app.add_subcommand("plot", "Render a line chart from a sweep summary CSV");
  plot_cmd->add_option("--summary", summary_path, "summary.csv path")->required();
  plot_cmd->add_option("--metric", metric, "Metric column to plot")->required();
  plot_cmd->add_option("--out", plot_out, "Output SVG path")->required();
  plot_cmd->add_option("--objective", objective_filter, "Filter to one objective");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(config_path, overrides);
    if (sweep_cmd->parsed()) return run_sweep(spec_path, out_dir, threads, overrides);
    if (verify_cmd->parsed()) return run_verify(suite, config_path, overrides);
    if (plot_cmd->parsed()) return run_plot(summary_path, metric, plot_out, objective_filter);
  } catch (const wpcn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
