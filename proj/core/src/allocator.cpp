#include "wpcn/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "rate_curve.hpp"
#include "wpcn/errors.hpp"

namespace wpcn {

const char* to_string(Objective o) {
  return o == Objective::max_sum ? "max_sum" : "max_min";
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::linear_baseline: return "linear_baseline";
    case Scheme::non_robust: return "non_robust";
    case Scheme::perfect_csi: return "perfect_csi";
  }
  return "unknown";
}

std::optional<Objective> objective_from_string(const std::string& s) {
  if (s == "max_sum") return Objective::max_sum;
  if (s == "max_min") return Objective::max_min;
  return std::nullopt;
}

std::optional<Scheme> scheme_from_string(const std::string& s) {
  if (s == "proposed") return Scheme::proposed;
  if (s == "linear_baseline") return Scheme::linear_baseline;
  if (s == "non_robust") return Scheme::non_robust;
  if (s == "perfect_csi") return Scheme::perfect_csi;
  return std::nullopt;
}

namespace {

constexpr double kLinearEta = 0.5;

// The scenario as one scheme sees it at design time: possibly
// substituted channels/radii, possibly a linear harvester, plus cached
// per-device worst-case uplink modes and rate curves.
struct DesignView {
  Scenario scenario;
  bool linear_eh = false;
  std::vector<Eigen::VectorXd> gamma_star;
  std::vector<Eigen::VectorXd> gains;  // gamma_star^2 / sigma_n2
  std::vector<detail::RateCurve> curves;

  int users() const { return static_cast<int>(scenario.users.size()); }

  double harvest(int k, double theta) const {
    if (linear_eh) return kLinearEta * theta;
    return harvest_nonlinear(theta, scenario.eh[k]);
  }

  double budget(int k, double tau0, double theta) const {
    return tau0 * harvest(k, theta) - scenario.t_max_s * scenario.p_c_w[k];
  }
};

void validate_scenario(const Scenario& sc) {
  const std::size_t k = sc.users.size();
  if (k == 0) throw std::domain_error("scenario has no users");
  if (sc.eh.size() != k || sc.eps.size() != k || sc.p_c_w.size() != k) {
    throw std::domain_error("scenario per-user arrays disagree in length");
  }
  if (!(sc.p_max_w > 0.0) || !(sc.t_max_s > 0.0) || !(sc.sigma_n2_w > 0.0)) {
    throw std::domain_error("scenario powers and slot length must be positive");
  }
  for (const auto& u : sc.users) {
    if (u.g_hat.rows() != sc.n_t || u.h_hat.cols() != sc.n_r ||
        u.g_hat.cols() != u.h_hat.rows()) {
      throw std::domain_error("scenario channel dimensions inconsistent");
    }
  }
}

DesignView make_view(const Scenario& sc, Scheme scheme) {
  validate_scenario(sc);
  DesignView view;
  view.scenario = sc;
  switch (scheme) {
    case Scheme::proposed:
      break;
    case Scheme::linear_baseline:
      view.linear_eh = true;
      break;
    case Scheme::non_robust:
      for (auto& u : view.scenario.users) u.g_radius = 0.0;
      break;
    case Scheme::perfect_csi:
      for (auto& u : view.scenario.users) {
        if (u.g_true.size() == 0 || u.h_true.size() == 0) {
          throw std::domain_error("perfect_csi scheme requires true channels in the scenario");
        }
        u.g_hat = u.g_true;
        u.h_hat = u.h_true;
        u.g_radius = 0.0;
        u.h_radius = 0.0;
      }
      break;
  }
  const int k = view.users();
  view.gamma_star.reserve(k);
  view.gains.reserve(k);
  view.curves.reserve(k);
  for (int i = 0; i < k; ++i) {
    const auto& u = view.scenario.users[i];
    Eigen::JacobiSVD<ComplexMatrix> svd(u.h_hat);
    const Eigen::VectorXd shrunk =
        worst_case_singular_values(svd.singularValues(), u.h_radius);
    view.gamma_star.push_back(shrunk);
    view.gains.emplace_back(shrunk.array().square() / view.scenario.sigma_n2_w);
    view.curves.emplace_back(view.gains.back());
  }
  return view;
}

// Shared report assembly once theta and budgets are fixed.
SolveReport assemble_report(const DesignView& view, double tau0,
                            const ComplexVector& unit, Objective objective,
                            const std::vector<double>& theta,
                            const std::vector<double>& budgets, double tol) {
  const Scenario& sc = view.scenario;
  const int k = view.users();
  const double t_wit = std::max(sc.t_max_s - tau0, 0.0);

  SolveReport rep;
  rep.policy.tau0 = tau0;
  rep.policy.beam = unit;
  rep.policy.theta = theta;
  rep.policy.tau.assign(k, 0.0);
  rep.policy.rates.assign(k, 0.0);
  rep.feasible_users.assign(k, false);

  std::vector<detail::UserSlot> slots;
  slots.reserve(k);
  for (int i = 0; i < k; ++i) {
    rep.feasible_users[i] = budgets[i] > 0.0 && view.curves[i].usable();
    if (rep.feasible_users[i]) {
      slots.push_back({i, budgets[i] / sc.eps[i], &view.curves[i], 0.0});
    }
  }

  if (objective == Objective::max_sum) {
    detail::allocate_sum_core(slots, t_wit, tol, rep.policy.tau);
  } else {
    const bool all_ok = static_cast<int>(slots.size()) == k;
    const double nu =
        detail::allocate_maxmin_core(slots, t_wit, tol, all_ok, rep.policy.tau);
    if (nu <= 0.0) {
      std::fill(rep.policy.tau.begin(), rep.policy.tau.end(), 0.0);
    }
  }

  rep.policy.lambda.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double tau_i = rep.policy.tau[i];
    if (tau_i > 0.0 && budgets[i] > 0.0) {
      rep.policy.rates[i] = view.curves[i].rate(tau_i, budgets[i] / sc.eps[i]);
      const double p_i = budgets[i] / (sc.eps[i] * tau_i);
      rep.policy.lambda.push_back(waterfill(view.gains[i], p_i).lambda);
    } else {
      rep.policy.lambda.push_back(Eigen::VectorXd::Zero(view.gains[i].size()));
    }
  }

  if (objective == Objective::max_sum) {
    double sum = 0.0;
    for (double r : rep.policy.rates) sum += r;
    rep.objective_value = sum;
  } else {
    double mn = std::numeric_limits<double>::infinity();
    for (double r : rep.policy.rates) mn = std::min(mn, r);
    rep.objective_value = std::isfinite(mn) ? mn : 0.0;
  }
  return rep;
}

std::vector<double> worst_case_inputs(const DesignView& view,
                                      const ComplexVector& unit) {
  std::vector<double> theta(view.users());
  for (int i = 0; i < view.users(); ++i) {
    const auto& u = view.scenario.users[i];
    theta[i] =
        worst_case_harvest_power(u.g_hat, unit, view.scenario.p_max_w, u.g_radius);
  }
  return theta;
}

ComplexVector normalized_beam(const ComplexVector& beam, int n_t) {
  if (beam.size() != n_t) {
    throw std::domain_error("beam length does not match transmit antenna count");
  }
  const double n = beam.norm();
  if (!(n > 0.0)) {
    throw std::domain_error("beam vector must be nonzero");
  }
  return beam / n;
}

SolveReport solve_fixed_tau0_impl(const DesignView& view, double tau0,
                                  const ComplexVector& beam,
                                  Objective objective, double tol) {
  if (tau0 < 0.0 || tau0 > view.scenario.t_max_s) {
    throw std::domain_error("tau0 outside [0, t_max]");
  }
  const ComplexVector unit = normalized_beam(beam, view.scenario.n_t);
  const std::vector<double> theta = worst_case_inputs(view, unit);
  std::vector<double> budgets(view.users());
  for (int i = 0; i < view.users(); ++i) {
    budgets[i] = view.budget(i, tau0, theta[i]);
  }
  return assemble_report(view, tau0, unit, objective, theta, budgets, tol);
}

// Candidate-based beam search with optional projected-gradient polish.
class BeamSearch {
 public:
  BeamSearch(const DesignView& view, const SolverOptions& options)
      : view_(view), options_(options), tau_scratch_(view.users(), 0.0) {
    build_candidates();
  }

  struct Best {
    ComplexVector u;
    double objective = 0.0;
  };

  double objective_at(double tau0, const ComplexVector& unit) {
    const Scenario& sc = view_.scenario;
    const double t_wit = std::max(sc.t_max_s - tau0, 0.0);
    slots_.clear();
    bool all_ok = true;
    for (int i = 0; i < view_.users(); ++i) {
      const auto& u = sc.users[i];
      const double theta =
          worst_case_harvest_power(u.g_hat, unit, sc.p_max_w, u.g_radius);
      const double e = view_.budget(i, tau0, theta);
      if (e > 0.0 && view_.curves[i].usable()) {
        slots_.push_back({i, e / sc.eps[i], &view_.curves[i], 0.0});
      } else {
        all_ok = false;
      }
    }
    if (options_.objective == Objective::max_sum) {
      return detail::allocate_sum_core(slots_, t_wit, options_.bisection_tol,
                                       tau_scratch_);
    }
    return detail::allocate_maxmin_core(slots_, t_wit, options_.bisection_tol,
                                        all_ok, tau_scratch_);
  }

  Best best_at(double tau0) {
    std::vector<double> scores(candidates_.size());
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      scores[i] = objective_at(tau0, candidates_[i]);
      if (scores[i] > scores[best_i]) best_i = i;
    }
    Best best{candidates_[best_i], scores[best_i]};
    if (options_.beam_multistarts > 0 && best.objective > 0.0) {
      std::vector<std::size_t> order(candidates_.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
      const int starts = std::min<int>(options_.beam_multistarts,
                                       static_cast<int>(order.size()));
      for (int s = 0; s < starts; ++s) {
        Best refined = refine(tau0, candidates_[order[s]], scores[order[s]]);
        if (refined.objective > best.objective) best = refined;
      }
    }
    return best;
  }

 private:
  void build_candidates() {
    const int k = view_.users();
    const int n_t = view_.scenario.n_t;
    std::vector<ComplexVector> dominant;
    dominant.reserve(k);
    for (int i = 0; i < k; ++i) {
      Eigen::JacobiSVD<ComplexMatrix> svd(view_.scenario.users[i].g_hat,
                                          Eigen::ComputeThinU);
      ComplexVector u = svd.matrixU().col(0);
      if (u.norm() > 0.0) {
        u.normalize();
      } else {
        u = ComplexVector::Zero(n_t);
        u(0) = 1.0;
      }
      dominant.push_back(u);
      push_candidate(u);
    }

    if (k < 2) return;
    // Align global phases against the first direction so weighted sums
    // combine constructively.
    std::vector<ComplexVector> aligned = dominant;
    for (int i = 1; i < k; ++i) {
      const std::complex<double> inner = dominant[0].dot(aligned[i]);
      if (std::abs(inner) > 1e-12) {
        aligned[i] *= std::conj(inner) / std::abs(inner);
      }
    }

    // Simplex grid of mixing weights; finer for few devices.
    const int q = k <= 4 ? 4 : (k <= 8 ? 2 : 1);
    std::vector<int> w(k, 0);
    std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
      if (pos == k - 1) {
        w[pos] = remaining;
        emit_combo(aligned, w, q);
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        w[pos] = v;
        enumerate(pos + 1, remaining - v);
      }
    };
    enumerate(0, q);
  }

  void emit_combo(const std::vector<ComplexVector>& aligned,
                  const std::vector<int>& w, int q) {
    int nonzero = 0;
    for (int v : w) nonzero += v > 0 ? 1 : 0;
    if (nonzero <= 1) return;  // pure corners duplicate the dominant directions
    ComplexVector cand = ComplexVector::Zero(view_.scenario.n_t);
    for (std::size_t i = 0; i < aligned.size(); ++i) {
      if (w[i] > 0) cand += (static_cast<double>(w[i]) / q) * aligned[i];
    }
    const double n = cand.norm();
    if (n < 1e-12) return;
    push_candidate(cand / n);
  }

  void push_candidate(const ComplexVector& u) {
    for (const auto& c : candidates_) {
      if (std::abs(c.dot(u)) > 1.0 - 1e-9) return;  // same direction up to phase
    }
    candidates_.push_back(u);
  }

  Best refine(double tau0, ComplexVector u, double f) {
    const int n_t = view_.scenario.n_t;
    const int n = 2 * n_t;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n_t; ++i) {
      x(i) = u(i).real();
      x(n_t + i) = u(i).imag();
    }

    const auto eval_vec = [&](const Eigen::VectorXd& v, ComplexVector* out) {
      ComplexVector cu(n_t);
      for (int i = 0; i < n_t; ++i) cu(i) = {v(i), v(n_t + i)};
      const double norm = cu.norm();
      if (!(norm > 0.0)) return -std::numeric_limits<double>::infinity();
      cu /= norm;
      if (out != nullptr) *out = cu;
      return objective_at(tau0, cu);
    };

    double alpha = 0.25;
    constexpr int kMaxSteps = 15;
    constexpr double kGradStep = 1e-6;
    for (int step = 0; step < kMaxSteps; ++step) {
      Eigen::VectorXd grad(n);
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd probe = x;
        probe(i) += kGradStep;
        grad(i) = (eval_vec(probe, nullptr) - f) / kGradStep;
      }
      const double gn = grad.norm();
      if (!(gn > 1e-14)) break;

      bool accepted = false;
      for (int attempt = 0; attempt < 6; ++attempt) {
        const Eigen::VectorXd trial = x + (alpha / gn) * grad;
        ComplexVector cu;
        const double ft = eval_vec(trial, &cu);
        if (ft > f + 1e-12 * std::max(1.0, std::abs(f))) {
          // Keep the renormalized point so steps stay on the sphere.
          for (int i = 0; i < n_t; ++i) {
            x(i) = cu(i).real();
            x(n_t + i) = cu(i).imag();
          }
          u = cu;
          f = ft;
          alpha *= 1.6;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    return {u, f};
  }

  const DesignView& view_;
  SolverOptions options_;
  std::vector<ComplexVector> candidates_;
  std::vector<detail::UserSlot> slots_;
  std::vector<double> tau_scratch_;
};

void validate_options(const SolverOptions& o) {
  if (o.tau0_grid_points < 2) {
    throw ConfigError("solver: tau0_grid_points must be at least 2");
  }
  if (!(o.bisection_tol > 0.0)) {
    throw ConfigError("solver: bisection_tol must be positive");
  }
  if (o.sca_max_iters < 1) {
    throw ConfigError("solver: sca_max_iters must be at least 1");
  }
  if (o.beam_multistarts < 0) {
    throw ConfigError("solver: beam_multistarts must be nonnegative");
  }
}

std::map<std::string, double> verify_kkt_impl(const SolveReport& report,
                                              const DesignView& view) {
  const Scenario& sc = view.scenario;
  const AllocationPolicy& p = report.policy;
  const int k = view.users();
  constexpr double kTiny = 1e-300;

  std::map<std::string, double> res;
  double spread = 0.0;
  double exhaustion = 0.0;
  double identity = 0.0;

  for (int i = 0; i < k; ++i) {
    if (!(i < static_cast<int>(p.tau.size())) || p.tau[i] <= 1e-12) continue;
    const Eigen::VectorXd& lam = p.lambda[i];
    const Eigen::VectorXd& g = view.gains[i];

    // (a) Equalized water level across active modes, expressed through
    // the energy-price multiplier beta implied by each mode.
    double beta_min = std::numeric_limits<double>::infinity();
    double beta_max = 0.0;
    const double lam_sum = lam.sum();
    for (Eigen::Index m = 0; m < lam.size(); ++m) {
      if (lam(m) <= 1e-9 * lam_sum || !(g(m) > 0.0)) continue;
      const double beta =
          1.0 / (detail::kLn2 * sc.eps[i] * (lam(m) + 1.0 / g(m)));
      beta_min = std::min(beta_min, beta);
      beta_max = std::max(beta_max, beta);
    }
    if (beta_max > 0.0 && std::isfinite(beta_min)) {
      spread = std::max(spread, (beta_max - beta_min) / beta_max);
    }

    // (b) Energy budget exhaustion for scheduled devices.
    const double e_budget = view.budget(i, p.tau0, p.theta[i]);
    const double spend = p.tau[i] * sc.eps[i] * lam_sum;
    exhaustion = std::max(
        exhaustion, std::abs(e_budget - spend) / std::max(std::abs(e_budget), kTiny));

    // (c) Transmit-time identity: time implied by budget and power.
    if (lam_sum > 0.0) {
      const double tau_implied = e_budget / (sc.eps[i] * lam_sum);
      identity = std::max(identity, std::abs(tau_implied - p.tau[i]) / p.tau[i]);
    }
  }

  double tau_total = p.tau0;
  for (double t : p.tau) tau_total += t;
  res["water_level_spread"] = spread;
  res["budget_exhaustion"] = exhaustion;
  res["time_identity"] = identity;
  res["time_budget"] = std::abs(sc.t_max_s - tau_total) / sc.t_max_s;
  const double beam_norm2 = p.beam.size() > 0 ? p.beam.squaredNorm() : 0.0;
  res["transmit_power"] =
      std::abs(sc.p_max_w * beam_norm2 - sc.p_max_w) / sc.p_max_w;
  return res;
}

SolveReport run_grid_solve(const DesignView& view, const SolverOptions& options) {
  BeamSearch search(view, options);
  const int g = options.tau0_grid_points;
  const double t_max = view.scenario.t_max_s;

  std::vector<double> grid(g), objs(g);
  std::vector<BeamSearch::Best> bests(g);
  int best_j = 0;
  for (int j = 0; j < g; ++j) {
    grid[j] = t_max * static_cast<double>(j) / (g - 1);
    bests[j] = search.best_at(grid[j]);
    objs[j] = bests[j].objective;
    if (objs[j] > objs[best_j]) best_j = j;  // ties keep the earlier (smaller) tau0
  }

  SolveReport rep = solve_fixed_tau0_impl(view, grid[best_j], bests[best_j].u,
                                          options.objective, options.bisection_tol);
  rep.tau0_grid = std::move(grid);
  rep.objective_grid = std::move(objs);
  rep.kkt_residuals = verify_kkt_impl(rep, view);
  return rep;
}

}  // namespace

ComplexVector optimize_beam(const Scenario& scenario, double tau0,
                            Objective objective, const SolverOptions& options) {
  if (tau0 < 0.0 || tau0 > scenario.t_max_s) {
    throw std::domain_error("tau0 outside [0, t_max]");
  }
  validate_options(options);
  SolverOptions opts = options;
  opts.objective = objective;
  DesignView view = make_view(scenario, opts.scheme);
  BeamSearch search(view, opts);
  return search.best_at(tau0).u;
}

SolveReport solve_fixed_tau0(const Scenario& scenario, double tau0,
                             const ComplexVector& beam, Objective objective) {
  DesignView view = make_view(scenario, Scheme::proposed);
  return solve_fixed_tau0_impl(view, tau0, beam, objective, 1e-9);
}

SolveReport solve(const Scenario& scenario, const SolverOptions& options) {
  validate_options(options);
  DesignView view = make_view(scenario, options.scheme);
  return run_grid_solve(view, options);
}

SolveReport baseline_solve(const Scenario& scenario, const SolverOptions& options) {
  validate_options(options);
  DesignView view = make_view(scenario, options.scheme);
  return run_grid_solve(view, options);
}

SolveReport sca_solve_fixed_tau0(const Scenario& scenario, double tau0,
                                 const ComplexVector& beam, Objective objective,
                                 const SolverOptions& options,
                                 const std::vector<double>& initial_anchors) {
  validate_options(options);
  DesignView view = make_view(scenario, options.scheme);
  if (tau0 < 0.0 || tau0 > view.scenario.t_max_s) {
    throw std::domain_error("tau0 outside [0, t_max]");
  }
  const ComplexVector unit = normalized_beam(beam, view.scenario.n_t);
  const int k = view.users();
  const std::vector<double> theta = worst_case_inputs(view, unit);

  std::vector<double> anchors;
  if (initial_anchors.empty()) {
    anchors.resize(k);
    for (int i = 0; i < k; ++i) anchors[i] = view.scenario.eh[i].turn_on_w;
  } else {
    if (static_cast<int>(initial_anchors.size()) != k) {
      throw std::domain_error("sca: anchor count does not match user count");
    }
    anchors = initial_anchors;
    for (double a : anchors) {
      if (a < 0.0) throw std::domain_error("sca: anchors must be nonnegative");
    }
  }

  SolveReport rep;
  std::vector<std::string> warnings;
  std::vector<bool> warned(k, false);
  std::vector<double> history;
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  for (int m = 0; m < options.sca_max_iters; ++m) {
    std::vector<double> budgets(k);
    for (int i = 0; i < k; ++i) {
      double surrogate;
      if (view.linear_eh) {
        surrogate = kLinearEta * theta[i];  // affine curve: tangent is exact
      } else {
        if (anchors[i] < view.scenario.eh[i].turn_on_w && !warned[i]) {
          warnings.push_back("sca: device " + std::to_string(i) +
                             " anchored below the harvester turn-on power; "
                             "tangent is not a certified upper bound there");
          warned[i] = true;
        }
        surrogate = sca_upper_bound(theta[i], anchors[i], view.scenario.eh[i]);
      }
      budgets[i] =
          tau0 * surrogate - view.scenario.t_max_s * view.scenario.p_c_w[i];
    }

    rep = assemble_report(view, tau0, unit, objective, theta, budgets,
                          options.bisection_tol);
    iterations = m + 1;
    history.push_back(rep.objective_value);

    // The achieved worst-case RF input is beam-determined, so the anchor
    // update is simply theta; a fixed point means the surrogate already
    // matches the true curve at the operating point.
    double anchor_move = 0.0;
    for (int i = 0; i < k; ++i) {
      anchor_move = std::max(anchor_move, std::abs(theta[i] - anchors[i]) /
                                              std::max(theta[i], 1e-30));
    }
    if (anchor_move <= 1e-12) break;
    anchors = theta;

    if (iterations > 1 &&
        std::abs(rep.objective_value - prev_obj) <=
            1e-6 * std::max(std::abs(rep.objective_value), 1e-300)) {
      break;
    }
    prev_obj = rep.objective_value;
  }

  rep.sca_iterations = iterations;
  rep.sca_objective_history = std::move(history);
  rep.warnings = std::move(warnings);
  return rep;
}

CsiEvalMode CsiEvalMode::sampled_errors(std::vector<ComplexMatrix> dg,
                                        std::vector<ComplexMatrix> dh) {
  CsiEvalMode mode;
  mode.sampled = true;
  mode.delta_g = std::move(dg);
  mode.delta_h = std::move(dh);
  return mode;
}

std::vector<double> evaluate_policy(const AllocationPolicy& policy,
                                    const Scenario& scenario,
                                    const EhEvalMode& eh_mode,
                                    const CsiEvalMode& csi_mode) {
  validate_scenario(scenario);
  const int k = static_cast<int>(scenario.users.size());
  if (static_cast<int>(policy.tau.size()) != k ||
      static_cast<int>(policy.lambda.size()) != k) {
    throw std::domain_error("evaluate_policy: policy arrays do not match user count");
  }
  if (csi_mode.sampled && (static_cast<int>(csi_mode.delta_g.size()) != k ||
                           static_cast<int>(csi_mode.delta_h.size()) != k)) {
    throw std::domain_error("evaluate_policy: sampled error count does not match users");
  }
  const ComplexVector unit = normalized_beam(policy.beam, scenario.n_t);

  std::vector<double> rates(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const auto& u = scenario.users[i];

    double theta;
    Eigen::VectorXd sv;
    if (csi_mode.sampled) {
      const ComplexMatrix g_eval = u.g_hat + csi_mode.delta_g[i];
      theta = scenario.p_max_w * (g_eval.adjoint() * unit).squaredNorm();
      Eigen::JacobiSVD<ComplexMatrix> svd(u.h_hat + csi_mode.delta_h[i]);
      sv = svd.singularValues();
    } else {
      theta = worst_case_harvest_power(u.g_hat, unit, scenario.p_max_w, u.g_radius);
      Eigen::JacobiSVD<ComplexMatrix> svd(u.h_hat);
      sv = worst_case_singular_values(svd.singularValues(), u.h_radius);
    }

    const double harvested = eh_mode.linear
                                 ? harvest_linear(theta, eh_mode.eta)
                                 : harvest_nonlinear(theta, scenario.eh[i]);
    const double budget =
        policy.tau0 * harvested - scenario.t_max_s * scenario.p_c_w[i];

    const double tau_i = policy.tau[i];
    if (tau_i <= 0.0) continue;
    const Eigen::VectorXd& lam = policy.lambda[i];
    const double spend = tau_i * scenario.eps[i] * lam.sum();

    double scale = 1.0;
    if (spend > budget) {
      scale = budget > 0.0 ? budget / spend : 0.0;
    }

    double rate = 0.0;
    const Eigen::Index modes = std::min<Eigen::Index>(lam.size(), sv.size());
    for (Eigen::Index m = 0; m < modes; ++m) {
      const double gain = sv(m) * sv(m) / scenario.sigma_n2_w;
      rate += std::log2(1.0 + scale * lam(m) * gain);
    }
    rates[i] = tau_i * rate;
  }
  return rates;
}

std::map<std::string, double> verify_kkt(const SolveReport& report,
                                         const Scenario& scenario) {
  DesignView view = make_view(scenario, Scheme::proposed);
  return verify_kkt_impl(report, view);
}

}  // namespace wpcn
