#include "wpcn/config.hpp"

#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>

#include "wpcn/errors.hpp"

namespace wpcn {

namespace {

using nlohmann::json;

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": invalid JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// Applies "dotted.path=value" into the tree; value parsed as JSON when
// possible, otherwise taken as a bare string.
void apply_override(json& root, const std::string& setting) {
  const auto eq = setting.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + setting);
  }
  const std::string path = setting.substr(0, eq);
  const std::string raw = setting.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // bare strings allowed, e.g. solver.scheme=proposed
  }

  json* node = &root;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) {
      throw ConfigError("override has an empty path segment: " + setting);
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null()) {
      throw ConfigError("override path crosses a non-object value: " + setting);
    }
    start = dot + 1;
  }
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) {
    throw ConfigError("expected a number at " + key);
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ConfigError("expected an integer at " + key);
  }
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ConfigError("expected a string at " + key);
  }
  return v.get<std::string>();
}

// Scenario block: fixed field names, unknown keys rejected so typos
// don't silently fall back to defaults.
void apply_scenario_field(ScenarioConfig& c, const std::string& key, const json& v) {
  if (key == "antennas.n_t") c.n_t = as_int(v, key);
  else if (key == "antennas.n_r") c.n_r = as_int(v, key);
  else if (key == "antennas.n_u") c.n_u = as_int(v, key);
  else if (key == "users.count") c.user_count = as_int(v, key);
  else if (key == "geometry.min_m") c.min_distance_m = as_number(v, key);
  else if (key == "geometry.max_m") c.max_distance_m = as_number(v, key);
  else if (key == "geometry.ir_distance_m") c.ir_distance_m = as_number(v, key);
  else if (key == "rf.carrier_hz") c.carrier_hz = as_number(v, key);
  else if (key == "rf.pathloss_exponent") c.pathloss_exponent = as_number(v, key);
  else if (key == "rf.rician_k_db") c.rician_k_db = as_number(v, key);
  else if (key == "rf.gain_ps_dbi") c.gain_ps_dbi = as_number(v, key);
  else if (key == "rf.gain_ir_dbi") c.gain_ir_dbi = as_number(v, key);
  else if (key == "noise.sigma_n2_dbm") c.sigma_n2_dbm = as_number(v, key);
  else if (key == "csi.sigma_est2") c.sigma_est2 = as_number(v, key);
  else if (key == "eh.M_watts") c.eh.max_power_w = as_number(v, key);
  else if (key == "eh.a_per_watt") c.eh.slope_per_w = as_number(v, key);
  else if (key == "eh.b_watts") c.eh.turn_on_w = as_number(v, key);
  else if (key == "power.p_max_dbm") c.p_max_dbm = as_number(v, key);
  else if (key == "power.t_max_s") c.t_max_s = as_number(v, key);
  else if (key == "power.eps") c.eps = as_number(v, key);
  else if (key == "power.p_c_watts") c.p_c_w = as_number(v, key);
  else throw ConfigError("unknown scenario config key: " + key);
}

ScenarioConfig scenario_from_json(const json& j, const std::string& scope) {
  ScenarioConfig c;
  for (const auto& [block, content] : j.items()) {
    if (!content.is_object()) {
      throw ConfigError("expected an object at " + scope + block);
    }
    for (const auto& [field, value] : content.items()) {
      apply_scenario_field(c, block + "." + field, value);
    }
  }
  // Range checks happen in generate_scenario; check EH positivity here
  // because EhParams construction is where it would otherwise surface.
  if (!(c.eh.max_power_w > 0.0) || !(c.eh.slope_per_w > 0.0) ||
      !(c.eh.turn_on_w > 0.0)) {
    throw ConfigError(scope + "eh parameters must be positive");
  }
  return c;
}

SolverOptions solver_from_json(const json& j) {
  SolverOptions o;
  for (const auto& [key, v] : j.items()) {
    if (key == "objective") {
      const auto parsed = objective_from_string(as_string(v, "solver.objective"));
      if (!parsed) throw ConfigError("solver.objective must be max_sum or max_min");
      o.objective = *parsed;
    } else if (key == "scheme") {
      const auto parsed = scheme_from_string(as_string(v, "solver.scheme"));
      if (!parsed) throw ConfigError("solver.scheme not recognized");
      o.scheme = *parsed;
    } else if (key == "tau0_grid_points") {
      o.tau0_grid_points = as_int(v, "solver.tau0_grid_points");
    } else if (key == "beam_multistarts") {
      o.beam_multistarts = as_int(v, "solver.beam_multistarts");
    } else if (key == "bisection_tol") {
      o.bisection_tol = as_number(v, "solver.bisection_tol");
    } else if (key == "sca_max_iters") {
      o.sca_max_iters = as_int(v, "solver.sca_max_iters");
    } else {
      throw ConfigError("unknown solver config key: " + key);
    }
  }
  return o;
}

std::uint64_t seed_from_json(const json& v) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ConfigError("seed must be a nonnegative integer");
  }
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw ConfigError("seed must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

SolveJobConfig solve_config_from_json(json j,
                                      const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(j, o);
  SolveJobConfig cfg;
  json scenario_part = json::object();
  for (const auto& [key, value] : j.items()) {
    if (key == "solver") {
      if (!value.is_object()) throw ConfigError("solver must be an object");
      cfg.solver = solver_from_json(value);
    } else if (key == "seed") {
      cfg.seed = seed_from_json(value);
    } else {
      scenario_part[key] = value;
    }
  }
  cfg.scenario = scenario_from_json(scenario_part, "");
  return cfg;
}

SweepSpec sweep_spec_from_json(json j, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(j, o);
  SweepSpec spec;
  bool have_values = false;
  json scenario_part = json::object();
  for (const auto& [key, value] : j.items()) {
    if (key == "sweep") {
      if (!value.is_object()) throw ConfigError("sweep must be an object");
      for (const auto& [skey, sval] : value.items()) {
        if (skey == "variable") {
          const auto parsed =
              sweep_variable_from_string(as_string(sval, "sweep.variable"));
          if (!parsed) throw ConfigError("sweep.variable not recognized");
          spec.variable = *parsed;
        } else if (skey == "values") {
          if (!sval.is_array() || sval.empty()) {
            throw ConfigError("sweep.values must be a nonempty array");
          }
          spec.values.clear();
          for (const auto& x : sval) spec.values.push_back(as_number(x, "sweep.values"));
          have_values = true;
        } else if (skey == "trials") {
          spec.trials = as_int(sval, "sweep.trials");
        } else if (skey == "schemes") {
          if (!sval.is_array() || sval.empty()) {
            throw ConfigError("sweep.schemes must be a nonempty array");
          }
          spec.schemes.clear();
          for (const auto& x : sval) {
            const auto parsed = scheme_from_string(as_string(x, "sweep.schemes"));
            if (!parsed) throw ConfigError("sweep.schemes entry not recognized");
            spec.schemes.push_back(*parsed);
          }
        } else if (skey == "objectives") {
          if (!sval.is_array() || sval.empty()) {
            throw ConfigError("sweep.objectives must be a nonempty array");
          }
          spec.objectives.clear();
          for (const auto& x : sval) {
            const auto parsed =
                objective_from_string(as_string(x, "sweep.objectives"));
            if (!parsed) throw ConfigError("sweep.objectives entry not recognized");
            spec.objectives.push_back(*parsed);
          }
        } else {
          throw ConfigError("unknown sweep config key: sweep." + skey);
        }
      }
    } else if (key == "base_config") {
      if (!value.is_object()) throw ConfigError("base_config must be an object");
      spec.base_config = scenario_from_json(value, "base_config.");
    } else if (key == "solver") {
      if (!value.is_object()) throw ConfigError("solver must be an object");
      spec.solver = solver_from_json(value);
    } else if (key == "seed") {
      spec.seed = seed_from_json(value);
    } else {
      throw ConfigError("unknown sweep spec key: " + key);
    }
  }
  if (!have_values) {
    throw ConfigError("sweep spec is missing sweep.values");
  }
  return spec;
}

}  // namespace

SolveJobConfig load_solve_config(const std::string& path,
                                 const std::vector<std::string>& overrides) {
  return solve_config_from_json(read_json_file(path), overrides);
}

SolveJobConfig solve_config_from_text(const std::string& json_text,
                                      const std::vector<std::string>& overrides) {
  return solve_config_from_json(parse_json_text(json_text, "<inline>"), overrides);
}

SweepSpec load_sweep_spec(const std::string& path,
                          const std::vector<std::string>& overrides) {
  return sweep_spec_from_json(read_json_file(path), overrides);
}

SweepSpec sweep_spec_from_text(const std::string& json_text,
                               const std::vector<std::string>& overrides) {
  return sweep_spec_from_json(parse_json_text(json_text, "<inline>"), overrides);
}

std::string report_to_json_string(const SolveReport& report, Objective objective,
                                  Scheme scheme, int indent) {
  json j;
  j["objective"] = to_string(objective);
  j["scheme"] = to_string(scheme);
  j["objective_value"] = report.objective_value;
  j["tau0"] = report.policy.tau0;
  j["tau"] = report.policy.tau;
  j["theta"] = report.policy.theta;
  j["rates"] = report.policy.rates;

  json beam = json::array();
  for (Eigen::Index i = 0; i < report.policy.beam.size(); ++i) {
    beam.push_back({{"re", report.policy.beam(i).real()},
                    {"im", report.policy.beam(i).imag()}});
  }
  j["beam"] = std::move(beam);

  json lambda = json::array();
  for (const auto& lam : report.policy.lambda) {
    lambda.push_back(std::vector<double>(lam.data(), lam.data() + lam.size()));
  }
  j["lambda"] = std::move(lambda);

  j["residuals"] = report.kkt_residuals;
  j["feasible_users"] = report.feasible_users;
  j["sca_iterations"] = report.sca_iterations;
  if (!report.sca_objective_history.empty()) {
    j["sca_objective_history"] = report.sca_objective_history;
  }
  j["tau0_grid"] = report.tau0_grid;
  j["objective_grid"] = report.objective_grid;
  j["warnings"] = report.warnings;
  return j.dump(indent);
}

}  // namespace wpcn
