#include "wpcn/verify.hpp"

#include <cmath>
#include <sstream>

#include "wpcn/allocator.hpp"
#include "wpcn/eh_model.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/rng.hpp"

namespace wpcn {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail = "") {
  out.push_back({name, pass, detail});
}

// ---------------------------------------------------------------- eh --

void suite_eh(std::vector<CheckResult>& out) {
  const EhParams params(0.024, 150.0, 0.014);

  const double at_zero = harvest_nonlinear(0.0, params);
  add(out, "eh.zero_input_zero_output", at_zero == 0.0, fmt(at_zero));

  const double at_one = harvest_nonlinear(1.0, params);
  add(out, "eh.saturates_at_max", std::abs(at_one - params.max_power_w) < 1e-6,
      fmt(at_one));

  // Derivative against central differences on a log-spaced input grid.
  bool deriv_ok = true;
  std::string deriv_detail;
  for (double p : {1e-4, 1e-3, 0.005, 0.014, 0.05, 0.2}) {
    const double h = 1e-7 * std::max(p, 1e-3);
    const double fd =
        (harvest_nonlinear(p + h, params) - harvest_nonlinear(p - h, params)) /
        (2.0 * h);
    const double an = harvest_derivative(p, params);
    if (std::abs(fd - an) > 1e-5 * std::max(1.0, std::abs(an))) {
      deriv_ok = false;
      deriv_detail = "p=" + fmt(p) + " fd=" + fmt(fd) + " analytic=" + fmt(an);
      break;
    }
  }
  add(out, "eh.derivative_matches_finite_difference", deriv_ok, deriv_detail);

  // Tangent majorant dominates the curve on the concave branch.
  bool tangent_ok = true;
  std::string tangent_detail;
  for (double anchor : {0.014, 0.02, 0.05, 0.1}) {
    for (double p : {0.014, 0.02, 0.05, 0.1, 0.5}) {
      const double bound = sca_upper_bound(p, anchor, params);
      const double truth = harvest_nonlinear(p, params);
      if (bound < truth - 1e-12) {
        tangent_ok = false;
        tangent_detail = "anchor=" + fmt(anchor) + " p=" + fmt(p);
      }
    }
  }
  add(out, "eh.tangent_bounds_concave_branch", tangent_ok, tangent_detail);

  bool monotone = true;
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = harvest_nonlinear(0.25 * i / 200.0, params);
    if (v < prev) monotone = false;
    prev = v;
  }
  add(out, "eh.monotone_increasing", monotone);
}

// --------------------------------------------------------- waterfill --

// Grid oracle: multi-stage refined simplex search, independent of the
// closed-form active-set logic under test.
double grid_waterfill_objective(const Eigen::VectorXd& gains, double budget) {
  const auto objective = [&](const Eigen::VectorXd& lam) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      s += std::log2(1.0 + lam(i) * gains(i));
    }
    return s;
  };

  if (gains.size() == 1) {
    Eigen::VectorXd lam(1);
    lam << budget;
    return objective(lam);
  }

  if (gains.size() == 2) {
    double lo = 0.0, hi = budget, best = 0.0;
    for (int stage = 0; stage < 4; ++stage) {
      const int n = 1000;
      double best_x = lo;
      best = -1.0;
      for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        Eigen::VectorXd lam(2);
        lam << x, budget - x;
        const double v = objective(lam);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      const double step = (hi - lo) / n;
      lo = std::max(0.0, best_x - 2.0 * step);
      hi = std::min(budget, best_x + 2.0 * step);
    }
    return best;
  }

  // Three modes: 2-D refined grid over (lam0, lam1).
  double lo0 = 0.0, hi0 = budget, lo1 = 0.0, hi1 = budget, best = -1.0;
  for (int stage = 0; stage < 4; ++stage) {
    const int n = 330;
    double bx = lo0, by = lo1;
    best = -1.0;
    for (int i = 0; i <= n; ++i) {
      const double x = lo0 + (hi0 - lo0) * i / n;
      for (int j = 0; j <= n; ++j) {
        const double y = lo1 + (hi1 - lo1) * j / n;
        if (x + y > budget) break;
        Eigen::VectorXd lam(3);
        lam << x, y, budget - x - y;
        const double v = objective(lam);
        if (v > best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    const double s0 = (hi0 - lo0) / n;
    const double s1 = (hi1 - lo1) / n;
    lo0 = std::max(0.0, bx - 2.0 * s0);
    hi0 = std::min(budget, bx + 2.0 * s0);
    lo1 = std::max(0.0, by - 2.0 * s1);
    hi1 = std::min(budget, by + 2.0 * s1);
  }
  return best;
}

void suite_waterfill(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    Eigen::VectorXd gains(2);
    gains << 4.0, 1.0;
    const auto wf = waterfill(gains, 1.5);
    const bool ok = std::abs(wf.lambda(0) - 1.125) < 1e-12 &&
                    std::abs(wf.lambda(1) - 0.375) < 1e-12;
    add(out, "waterfill.two_mode_closed_form", ok,
        fmt(wf.lambda(0)) + "," + fmt(wf.lambda(1)));
  }

  RandomStream rng(derive_seed(seed, 100));
  bool grid_ok = true;
  std::string detail;
  for (int inst = 0; inst < 10 && grid_ok; ++inst) {
    const int modes = 1 + static_cast<int>(rng.uniform() * 3.0);
    Eigen::VectorXd gains(modes);
    for (int i = 0; i < modes; ++i) gains(i) = 0.25 + 4.0 * rng.uniform();
    const double budget = 0.5 + 2.5 * rng.uniform();

    const auto wf = waterfill(gains, budget);
    double wf_obj = 0.0;
    for (int i = 0; i < modes; ++i) {
      wf_obj += std::log2(1.0 + wf.lambda(i) * gains(i));
    }
    const double oracle = grid_waterfill_objective(gains, budget);
    if (std::abs(wf_obj - oracle) > 1e-6 || wf.lambda.sum() > budget + 1e-9 ||
        wf.lambda.minCoeff() < -1e-15) {
      grid_ok = false;
      detail = "instance " + std::to_string(inst) + ": waterfill=" + fmt(wf_obj) +
               " grid=" + fmt(oracle);
    }
  }
  add(out, "waterfill.matches_grid_oracle", grid_ok, detail);
}

// -------------------------------------------------------- worst_case --

void suite_worst_case(std::vector<CheckResult>& out, std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, 200));
  bool sampled_ok = true;
  bool witness_ok = true;
  bool boundary_ok = true;
  std::string detail_s, detail_w, detail_b;

  for (int inst = 0; inst < 10; ++inst) {
    const int n_t = 2 + static_cast<int>(rng.uniform() * 3.0);
    const int n_u = 1 + static_cast<int>(rng.uniform() * 2.0);
    ComplexMatrix g(n_t, n_u);
    for (int r = 0; r < n_t; ++r) {
      for (int c = 0; c < n_u; ++c) g(r, c) = rng.complex_normal();
    }
    ComplexVector u(n_t);
    for (int r = 0; r < n_t; ++r) u(r) = rng.complex_normal();
    u.normalize();
    const double p = 0.5 + 2.0 * rng.uniform();
    const double response = (g.adjoint() * u).norm();
    const double radius = rng.uniform() * 0.8 * response;

    const double closed = worst_case_harvest_power(g, u, p, radius);

    UserChannel user;
    user.g_hat = g;
    user.g_radius = radius;
    user.h_hat = ComplexMatrix::Ones(n_u, 1);
    user.h_radius = 0.0;
    const auto draws = sample_uncertainty(user, 2000, derive_seed(seed, 300 + inst));
    for (const auto& [dg, dh] : draws) {
      if (dg.norm() > radius + 1e-9) {
        boundary_ok = false;
        detail_b = "draw exceeded radius at instance " + std::to_string(inst);
      }
      const double received = p * ((g + dg).adjoint() * u).squaredNorm();
      if (received < closed - 1e-9 * std::max(closed, 1.0)) {
        sampled_ok = false;
        detail_s = "sampled " + fmt(received) + " below closed form " + fmt(closed);
      }
    }

    const ComplexMatrix witness = worst_case_harvest_witness(g, u, radius);
    const double at_witness = p * ((g + witness).adjoint() * u).squaredNorm();
    if (std::abs(at_witness - closed) > 1e-9 * std::max(closed, 1e-12) ||
        witness.norm() > radius + 1e-12) {
      witness_ok = false;
      detail_w = "witness " + fmt(at_witness) + " vs closed " + fmt(closed);
    }
  }
  add(out, "worst_case.sampling_never_beats_closed_form", sampled_ok, detail_s);
  add(out, "worst_case.witness_attains_bound", witness_ok, detail_w);
  add(out, "worst_case.samples_respect_radius", boundary_ok, detail_b);
}

// ------------------------------------------------------- s_procedure --

void suite_s_procedure(std::vector<CheckResult>& out, std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, 400));
  bool accept_ok = true;
  bool reject_ok = true;
  std::string detail_a, detail_r;

  for (int inst = 0; inst < 5; ++inst) {
    const int n_t = 2 + static_cast<int>(rng.uniform() * 2.0);
    const int n_u = 1 + static_cast<int>(rng.uniform() * 2.0);
    ComplexMatrix g(n_t, n_u);
    for (int r = 0; r < n_t; ++r) {
      for (int c = 0; c < n_u; ++c) g(r, c) = rng.complex_normal();
    }
    ComplexVector u(n_t);
    for (int r = 0; r < n_t; ++r) u(r) = rng.complex_normal();
    u.normalize();
    const double p = 0.5 + 2.0 * rng.uniform();
    const double response = (g.adjoint() * u).norm();
    const double radius = (0.1 + 0.6 * rng.uniform()) * response;

    const ComplexMatrix v = p * (u * u.adjoint());
    const double theta = worst_case_harvest_power(g, u, p, radius);

    if (!s_procedure_search(v, theta * (1.0 - 1e-6), g, radius)) {
      accept_ok = false;
      detail_a = "instance " + std::to_string(inst) + " rejected achievable level";
    }
    if (s_procedure_search(v, theta * 1.1, g, radius)) {
      reject_ok = false;
      detail_r = "instance " + std::to_string(inst) + " certified excessive level";
    }
  }
  add(out, "s_procedure.certifies_achievable_levels", accept_ok, detail_a);
  add(out, "s_procedure.rejects_excessive_levels", reject_ok, detail_r);
}

// --------------------------------------------------------------- kkt --

void suite_kkt(std::vector<CheckResult>& out, const ScenarioConfig& config,
               std::uint64_t seed) {
  SolverOptions options;
  options.beam_multistarts = 0;  // beam quality does not affect the residuals
  bool ok = true;
  std::string detail;
  for (int inst = 0; inst < 5 && ok; ++inst) {
    const Scenario sc = generate_scenario(config, derive_seed(seed, 500 + inst));
    const SolveReport rep = solve(sc, options);
    if (rep.objective_value <= 0.0) continue;  // degenerate draw, nothing to check
    for (const auto& [name, value] : rep.kkt_residuals) {
      if (value > 1e-6) {
        ok = false;
        detail = "instance " + std::to_string(inst) + ": " + name + "=" + fmt(value);
      }
    }
  }
  add(out, "kkt.residuals_below_1e-6", ok, detail);
}

}  // namespace

std::vector<std::string> verification_suite_names() {
  return {"eh", "waterfill", "worst_case", "s_procedure", "kkt"};
}

std::vector<CheckResult> run_verification_suite(const std::string& suite,
                                                const ScenarioConfig& config,
                                                std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "eh") {
    suite_eh(out);
    known = true;
  }
  if (all || suite == "waterfill") {
    suite_waterfill(out, seed);
    known = true;
  }
  if (all || suite == "worst_case") {
    suite_worst_case(out, seed);
    known = true;
  }
  if (all || suite == "s_procedure") {
    suite_s_procedure(out, seed);
    known = true;
  }
  if (all || suite == "kkt") {
    suite_kkt(out, config, seed);
    known = true;
  }
  if (!known) {
    throw ConfigError("unknown verification suite: " + suite);
  }
  return out;
}

}  // namespace wpcn
