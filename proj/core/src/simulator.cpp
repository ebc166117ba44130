#include "wpcn/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "wpcn/errors.hpp"
#include "wpcn/rng.hpp"

namespace wpcn {

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::p_max_dbm: return "p_max_dbm";
    case SweepVariable::users_k: return "users_k";
    case SweepVariable::sigma_est2: return "sigma_est2";
    case SweepVariable::n_t_n_r: return "n_t_n_r";
    case SweepVariable::n_u: return "n_u";
  }
  return "unknown";
}

std::optional<SweepVariable> sweep_variable_from_string(const std::string& s) {
  if (s == "p_max_dbm") return SweepVariable::p_max_dbm;
  if (s == "users_k") return SweepVariable::users_k;
  if (s == "sigma_est2") return SweepVariable::sigma_est2;
  if (s == "n_t_n_r") return SweepVariable::n_t_n_r;
  if (s == "n_u") return SweepVariable::n_u;
  return std::nullopt;
}

namespace {

int integral_value(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 1.0) {
    throw ConfigError(std::string("sweep: ") + what +
                      " values must be positive integers");
  }
  return static_cast<int>(r);
}

ScenarioConfig config_at(const SweepSpec& spec, double value) {
  ScenarioConfig c = spec.base_config;
  switch (spec.variable) {
    case SweepVariable::p_max_dbm:
      c.p_max_dbm = value;
      break;
    case SweepVariable::users_k:
      c.user_count = integral_value(value, "users_k");
      break;
    case SweepVariable::sigma_est2:
      if (value < 0.0) throw ConfigError("sweep: sigma_est2 values must be nonnegative");
      c.sigma_est2 = value;
      break;
    case SweepVariable::n_t_n_r:
      c.n_t = integral_value(value, "n_t_n_r");
      c.n_r = c.n_t;
      break;
    case SweepVariable::n_u:
      c.n_u = integral_value(value, "n_u");
      break;
  }
  return c;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep: values must be nonempty");
  if (!std::is_sorted(spec.values.begin(), spec.values.end())) {
    throw ConfigError("sweep: values must be sorted ascending");
  }
  if (spec.trials < 1) throw ConfigError("sweep: trials must be at least 1");
  if (spec.schemes.empty()) throw ConfigError("sweep: schemes must be nonempty");
  if (spec.objectives.empty()) throw ConfigError("sweep: objectives must be nonempty");
}

void run_one_trial(const SweepSpec& spec, std::size_t value_idx, int trial,
                   std::vector<TrialRow>& rows, std::size_t row_base) {
  const double value = spec.values[value_idx];
  const ScenarioConfig config = config_at(spec, value);
  const Scenario scenario =
      generate_scenario(config, derive_seed(spec.seed, static_cast<std::uint64_t>(trial)));

  // Achieved rates are the throughput each policy can guarantee once
  // deployed: the non-linear harvester and the full channel uncertainty
  // apply regardless of the model the scheme assumed while designing.
  // The genie benchmark is the exception -- it both designs and is scored
  // on the realized channels, so it sees no uncertainty at all.
  Scenario revealed = scenario;
  for (auto& u : revealed.users) {
    u.g_hat = u.g_true;
    u.h_hat = u.h_true;
    u.g_radius = 0.0;
    u.h_radius = 0.0;
  }

  std::size_t slot = row_base;
  for (Scheme scheme : spec.schemes) {
    for (Objective objective : spec.objectives) {
      SolverOptions options = spec.solver;
      options.scheme = scheme;
      options.objective = objective;
      const SolveReport rep = solve(scenario, options);

      TrialRow row;
      row.sweep_value = value;
      row.trial = trial;
      row.scheme = scheme;
      row.objective = objective;
      row.tau0 = rep.policy.tau0;
      row.rates_predicted = rep.policy.rates;
      const Scenario& grading = scheme == Scheme::perfect_csi ? revealed : scenario;
      row.rates_achieved = evaluate_policy(rep.policy, grading,
                                           EhEvalMode::nonlinear(),
                                           CsiEvalMode::worst_case());

      const auto accumulate = [](const std::vector<double>& rates, double* sum,
                                 double* mn) {
        *sum = 0.0;
        *mn = rates.empty() ? 0.0 : std::numeric_limits<double>::infinity();
        for (double r : rates) {
          *sum += r;
          *mn = std::min(*mn, r);
        }
      };
      accumulate(row.rates_predicted, &row.sum_predicted, &row.min_predicted);
      accumulate(row.rates_achieved, &row.sum_achieved, &row.min_achieved);
      rows[slot++] = std::move(row);
    }
  }
}

}  // namespace

TrialTable run_sweep(const SweepSpec& spec, int threads) {
  validate_spec(spec);
  TrialTable table;
  table.variable = spec.variable;

  const std::size_t combos = spec.schemes.size() * spec.objectives.size();
  const std::size_t jobs = spec.values.size() * static_cast<std::size_t>(spec.trials);
  table.rows.resize(jobs * combos);

  const auto run_job = [&](std::size_t job) {
    const std::size_t value_idx = job / spec.trials;
    const int trial = static_cast<int>(job % spec.trials);
    run_one_trial(spec, value_idx, trial, table.rows, job * combos);
  };

  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (std::size_t job = 0; job < jobs; ++job) run_job(job);
  } else {
    // Deterministic output placement: each job owns a fixed row range,
    // so execution order cannot affect the table.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t job = next.fetch_add(1);
          if (job >= jobs) return;
          run_job(job);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return table;
}

std::vector<SummaryRow> summarize(const TrialTable& table) {
  if (table.rows.empty()) {
    throw std::domain_error("summarize: empty trial table");
  }

  struct Key {
    double value;
    Scheme scheme;
    Objective objective;
    bool operator==(const Key& o) const {
      return value == o.value && scheme == o.scheme && objective == o.objective;
    }
  };
  struct Acc {
    Key key;
    std::vector<double> sum_a, min_a, sum_p, min_p, tau0;
  };

  // Group in first-seen order, which is sweep order by construction.
  std::vector<Acc> groups;
  for (const auto& row : table.rows) {
    const Key key{row.sweep_value, row.scheme, row.objective};
    Acc* acc = nullptr;
    for (auto& g : groups) {
      if (g.key == key) {
        acc = &g;
        break;
      }
    }
    if (acc == nullptr) {
      groups.push_back(Acc{key, {}, {}, {}, {}, {}});
      acc = &groups.back();
    }
    acc->sum_a.push_back(row.sum_achieved);
    acc->min_a.push_back(row.min_achieved);
    acc->sum_p.push_back(row.sum_predicted);
    acc->min_p.push_back(row.min_predicted);
    acc->tau0.push_back(row.tau0);
  }

  const auto mean_stderr = [](const std::vector<double>& xs, double* mean,
                              double* se) {
    // Fixed-order accumulation: trial order, as stored.
    double s = 0.0;
    for (double x : xs) s += x;
    *mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) {
      *se = 0.0;
      return;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - *mean) * (x - *mean);
    const double sample_var = ss / static_cast<double>(xs.size() - 1);
    *se = std::sqrt(sample_var / static_cast<double>(xs.size()));
  };

  std::vector<SummaryRow> out;
  const std::string var = to_string(table.variable);
  for (const auto& g : groups) {
    const struct {
      const char* name;
      const std::vector<double>* xs;
    } metrics[] = {
        {"sum_throughput_achieved", &g.sum_a},
        {"min_throughput_achieved", &g.min_a},
        {"sum_throughput_predicted", &g.sum_p},
        {"min_throughput_predicted", &g.min_p},
        {"tau0", &g.tau0},
    };
    for (const auto& m : metrics) {
      SummaryRow row;
      row.sweep_var = var;
      row.sweep_value = g.key.value;
      row.scheme = to_string(g.key.scheme);
      row.objective = to_string(g.key.objective);
      row.metric = m.name;
      row.trials = static_cast<int>(m.xs->size());
      mean_stderr(*m.xs, &row.mean, &row.stderr_);
      out.push_back(std::move(row));
    }
  }
  return out;
}

namespace {

std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  return out;
}

}  // namespace

void write_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  auto out = open_or_throw(path);
  out << "sweep_var,sweep_value,scheme,objective,metric,mean,stderr,trials\n";
  for (const auto& r : rows) {
    out << r.sweep_var << ',' << fmt9(r.sweep_value) << ',' << r.scheme << ','
        << r.objective << ',' << r.metric << ',' << fmt9(r.mean) << ','
        << fmt9(r.stderr_) << ',' << r.trials << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_trials_csv(const TrialTable& table, const std::string& path) {
  auto out = open_or_throw(path);
  out << "sweep_var,sweep_value,trial,scheme,objective,tau0,sum_achieved,"
         "min_achieved,sum_predicted,min_predicted,rates_achieved,rates_predicted\n";
  const std::string var = to_string(table.variable);
  const auto joined = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) s += ';';
      s += fmt9(xs[i]);
    }
    return s;
  };
  for (const auto& r : table.rows) {
    out << var << ',' << fmt9(r.sweep_value) << ',' << r.trial << ','
        << to_string(r.scheme) << ',' << to_string(r.objective) << ','
        << fmt9(r.tau0) << ',' << fmt9(r.sum_achieved) << ','
        << fmt9(r.min_achieved) << ',' << fmt9(r.sum_predicted) << ','
        << fmt9(r.min_predicted) << ',' << joined(r.rates_achieved) << ','
        << joined(r.rates_predicted) << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace wpcn
