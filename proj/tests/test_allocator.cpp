#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wpcn/allocator.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/eh_model.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/rng.hpp"

using namespace wpcn;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

// Single-device network with real channels and hand-picked numbers so
// every intermediate quantity has a closed form.
Scenario hand_scenario() {
  Scenario sc;
  sc.n_t = 2;
  sc.n_r = 1;
  sc.n_u = 1;
  sc.p_max_w = 2.0;
  sc.t_max_s = 1.0;
  sc.sigma_n2_w = 1e-6;

  UserChannel u;
  u.g_hat = ComplexMatrix::Zero(2, 1);
  u.g_hat(0, 0) = 0.2;
  u.h_hat = ComplexMatrix::Zero(1, 1);
  u.h_hat(0, 0) = 0.01;
  u.g_radius = 0.05;
  u.h_radius = 0.002;
  u.g_true = u.g_hat;
  u.h_true = u.h_hat;
  sc.users.push_back(u);
  sc.eh.push_back(EhParams(0.024, 150.0, 0.014));
  sc.eps.push_back(5.0);
  sc.p_c_w.push_back(1e-6);
  return sc;
}

ScenarioConfig desk_config(int users) {
  ScenarioConfig cfg;
  cfg.n_t = 3;
  cfg.n_r = 2;
  cfg.n_u = 2;
  cfg.user_count = users;
  cfg.max_distance_m = 10.0;  // keep every device comfortably harvestable
  return cfg;
}

double fd_marginal_rate(double tau, double energy, const Eigen::VectorXd& gs,
                        double sigma_n2, double eps) {
  const double h = 1e-7 * tau;
  return (user_rate(tau + h, energy, gs, sigma_n2, eps) -
          user_rate(tau - h, energy, gs, sigma_n2, eps)) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("waterfill two-mode closed form") {
  Eigen::VectorXd gains(2);
  gains << 4.0, 1.0;

  auto wf = waterfill(gains, 1.5);
  CHECK(wf.lambda(0) == doctest::Approx(1.125).epsilon(1e-14));
  CHECK(wf.lambda(1) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(wf.water_level == doctest::Approx(1.375).epsilon(1e-14));
  CHECK_FALSE(wf.no_usable_mode);

  // A small budget leaves the weak mode dry.
  wf = waterfill(gains, 0.5);
  CHECK(wf.lambda(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wf.lambda(1) == 0.0);
}

TEST_CASE("waterfill degenerate inputs") {
  Eigen::VectorXd gains(3);
  gains << 2.0, 0.0, -1.0;

  const auto wf = waterfill(gains, 1.0);
  CHECK(wf.lambda(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wf.lambda(1) == 0.0);
  CHECK(wf.lambda(2) == 0.0);
  CHECK_FALSE(wf.no_usable_mode);

  CHECK(waterfill(gains, 0.0).lambda.sum() == 0.0);
  CHECK(waterfill(gains, -1.0).lambda.sum() == 0.0);

  Eigen::VectorXd dead(2);
  dead << 0.0, -3.0;
  CHECK(waterfill(dead, 1.0).no_usable_mode);
}

TEST_CASE("waterfill conserves the budget and keeps marginals ordered") {
  RandomStream rng(5150);
  for (int inst = 0; inst < 50; ++inst) {
    const int modes = 1 + static_cast<int>(rng.uniform() * 4.0);
    Eigen::VectorXd gains(modes);
    for (int i = 0; i < modes; ++i) {
      gains(i) = std::pow(10.0, rng.uniform(-2.0, 3.0));
    }
    const double budget = std::pow(10.0, rng.uniform(-3.0, 1.0));
    const auto wf = waterfill(gains, budget);

    CHECK(wf.lambda.sum() == doctest::Approx(budget).epsilon(1e-12));
    CHECK(wf.lambda.minCoeff() >= 0.0);
    for (int i = 0; i < modes; ++i) {
      if (wf.lambda(i) > 0.0) {
        // Filled modes sit exactly at the water level.
        CHECK(wf.lambda(i) + 1.0 / gains(i) ==
              doctest::Approx(wf.water_level).epsilon(1e-12));
      } else {
        // Dry modes would sit above it.
        CHECK(1.0 / gains(i) >= wf.water_level * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("user_rate single-mode closed form and edge cases") {
  const Eigen::VectorXd gs = vec1(0.008);
  const double expected = 0.5 * std::log2(1.0 + (0.01 / (5.0 * 0.5)) * 64.0);
  CHECK(user_rate(0.5, 0.01, gs, 1e-6, 5.0) ==
        doctest::Approx(expected).epsilon(1e-14));

  CHECK(user_rate(0.0, 0.01, gs, 1e-6, 5.0) == 0.0);
  CHECK(user_rate(0.5, 0.0, gs, 1e-6, 5.0) == 0.0);
  CHECK(user_rate(0.5, -1.0, gs, 1e-6, 5.0) == 0.0);
  CHECK(user_rate(0.5, 0.01, vec1(0.0), 1e-6, 5.0) == 0.0);
  CHECK_THROWS_AS(user_rate(0.5, 0.01, gs, 0.0, 5.0), std::domain_error);
  CHECK_THROWS_AS(user_rate(0.5, 0.01, gs, 1e-6, 0.0), std::domain_error);
}

TEST_CASE("sum-throughput time split: symmetry, exhaustion, equal marginals") {
  const double sigma_n2 = 1e-6;
  const std::vector<double> eps{5.0, 5.0, 5.0};

  // Identical devices split the window evenly.
  {
    const std::vector<double> budgets{0.02, 0.02, 0.02};
    const std::vector<Eigen::VectorXd> gs{vec1(0.008), vec1(0.008), vec1(0.008)};
    const auto tau = allocate_time_sum(budgets, gs, 0.9, sigma_n2, eps);
    for (double t : tau) CHECK(t == doctest::Approx(0.3).epsilon(1e-9));
  }

  // Heterogeneous devices: window exhausted, marginal rates equalized.
  {
    const std::vector<double> budgets{0.01, 0.02, 0.015};
    const std::vector<Eigen::VectorXd> gs{vec1(0.007), vec1(0.009), vec1(0.0085)};
    const auto tau = allocate_time_sum(budgets, gs, 0.7, sigma_n2, eps);

    double total = 0.0;
    for (double t : tau) {
      CHECK(t > 0.0);
      total += t;
    }
    CHECK(total == doctest::Approx(0.7).epsilon(1e-12));

    std::vector<double> marginals;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      marginals.push_back(fd_marginal_rate(tau[k], budgets[k], gs[k], sigma_n2, eps[k]));
    }
    for (std::size_t k = 1; k < marginals.size(); ++k) {
      CHECK(marginals[k] == doctest::Approx(marginals[0]).epsilon(1e-5));
    }
  }
}

TEST_CASE("sum-throughput split matches a fine grid on two devices") {
  const double sigma_n2 = 1e-6;
  const std::vector<double> eps{5.0, 4.0};
  const std::vector<double> budgets{0.012, 0.03};
  std::vector<Eigen::VectorXd> gs;
  Eigen::VectorXd g0(2);
  g0 << 0.009, 0.004;
  gs.push_back(g0);
  gs.push_back(vec1(0.006));
  const double t_wit = 0.8;

  const auto tau = allocate_time_sum(budgets, gs, t_wit, sigma_n2, eps);
  const double got = user_rate(tau[0], budgets[0], gs[0], sigma_n2, eps[0]) +
                     user_rate(tau[1], budgets[1], gs[1], sigma_n2, eps[1]);

  double best = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double t0 = t_wit * i / n;
    const double v = user_rate(t0, budgets[0], gs[0], sigma_n2, eps[0]) +
                     user_rate(t_wit - t0, budgets[1], gs[1], sigma_n2, eps[1]);
    best = std::max(best, v);
  }
  CHECK(got >= best - 1e-7);
  CHECK(got <= best + 1e-4);  // grid can only undershoot the optimum
}

TEST_CASE("sum-throughput split drops unusable devices") {
  const std::vector<double> budgets{0.02, -0.01, 0.02};
  const std::vector<Eigen::VectorXd> gs{vec1(0.008), vec1(0.008), vec1(0.0)};
  const auto tau = allocate_time_sum(budgets, gs, 0.6, 1e-6, {5.0, 5.0, 5.0});
  CHECK(tau[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(tau[1] == 0.0);
  CHECK(tau[2] == 0.0);
}

TEST_CASE("max-min split equalizes rates and exhausts the window") {
  const double sigma_n2 = 1e-6;
  const std::vector<double> eps{5.0, 5.0, 5.0};
  const std::vector<double> budgets{0.008, 0.03, 0.016};
  const std::vector<Eigen::VectorXd> gs{vec1(0.005), vec1(0.011), vec1(0.008)};

  const auto [nu, tau] = allocate_time_maxmin(budgets, gs, 0.75, sigma_n2, eps);
  CHECK(nu > 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double r = user_rate(tau[k], budgets[k], gs[k], sigma_n2, eps[k]);
    CHECK(r >= nu * (1.0 - 1e-9));
    CHECK(r == doctest::Approx(nu).epsilon(1e-6));
    total += tau[k];
  }
  CHECK(total == doctest::Approx(0.75).epsilon(1e-12));

  // Cross-check the value against a fine grid on a two-device instance.
  const std::vector<double> b2{0.01, 0.04};
  const std::vector<Eigen::VectorXd> g2{vec1(0.006), vec1(0.012)};
  const auto [nu2, tau2] =
      allocate_time_maxmin(b2, g2, 0.8, sigma_n2, {5.0, 5.0});
  // The optimum sits at the r1 = r2 kink, so refine the grid in stages.
  double lo = 0.0, hi = 0.8, best = 0.0;
  for (int stage = 0; stage < 3; ++stage) {
    const int n = 10000;
    double best_t = lo;
    best = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t0 = lo + (hi - lo) * i / n;
      const double v = std::min(user_rate(t0, b2[0], g2[0], sigma_n2, 5.0),
                                user_rate(0.8 - t0, b2[1], g2[1], sigma_n2, 5.0));
      if (v > best) {
        best = v;
        best_t = t0;
      }
    }
    const double step = (hi - lo) / n;
    lo = std::max(0.0, best_t - 2.0 * step);
    hi = std::min(0.8, best_t + 2.0 * step);
  }
  CHECK(nu2 == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("max-min split pins the value to zero when any device is dry") {
  const std::vector<double> budgets{0.02, -0.01};
  const std::vector<Eigen::VectorXd> gs{vec1(0.008), vec1(0.008)};
  const auto [nu, tau] = allocate_time_maxmin(budgets, gs, 0.6, 1e-6, {5.0, 5.0});
  CHECK(nu == 0.0);
  CHECK(tau[0] == 0.0);
  CHECK(tau[1] == 0.0);
}

TEST_CASE("fixed charging-time solve reproduces the hand-computed chain") {
  const Scenario sc = hand_scenario();
  ComplexVector beam(2);
  beam << 1.0, 0.0;
  const double tau0 = 0.4;

  const SolveReport rep = solve_fixed_tau0(sc, tau0, beam, Objective::max_sum);

  const double theta = 2.0 * 0.15 * 0.15;  // p * (|g| - radius)^2
  CHECK(rep.policy.theta[0] == doctest::Approx(theta).epsilon(1e-14));

  const double budget = tau0 * harvest_nonlinear(theta, sc.eh[0]) - 1e-6;
  REQUIRE(budget > 0.0);
  CHECK(rep.feasible_users[0]);
  CHECK(rep.policy.tau[0] == doctest::Approx(0.6).epsilon(1e-12));

  const double expected_rate =
      0.6 * std::log2(1.0 + (budget / (5.0 * 0.6)) * (0.008 * 0.008 / 1e-6));
  CHECK(rep.policy.rates[0] == doctest::Approx(expected_rate).epsilon(1e-12));
  CHECK(rep.objective_value == doctest::Approx(expected_rate).epsilon(1e-12));
  CHECK(rep.policy.lambda[0](0) ==
        doctest::Approx(budget / (5.0 * 0.6)).epsilon(1e-12));

  CHECK_THROWS_AS(solve_fixed_tau0(sc, -0.1, beam, Objective::max_sum),
                  std::domain_error);
  CHECK_THROWS_AS(solve_fixed_tau0(sc, 1.5, beam, Objective::max_sum),
                  std::domain_error);
  ComplexVector zero = ComplexVector::Zero(2);
  CHECK_THROWS_AS(solve_fixed_tau0(sc, 0.4, zero, Objective::max_sum),
                  std::domain_error);
}

TEST_CASE("grid solve records its scan and returns the argmax") {
  const Scenario sc = generate_scenario(desk_config(3), 21);
  SolverOptions opts;
  opts.tau0_grid_points = 20;
  opts.beam_multistarts = 0;

  const SolveReport rep = solve(sc, opts);
  REQUIRE(rep.tau0_grid.size() == 20);
  REQUIRE(rep.objective_grid.size() == 20);
  CHECK(rep.tau0_grid.front() == 0.0);
  CHECK(rep.tau0_grid.back() == doctest::Approx(1.0).epsilon(1e-15));

  double best = rep.objective_grid[0];
  std::size_t best_j = 0;
  for (std::size_t j = 1; j < rep.objective_grid.size(); ++j) {
    if (rep.objective_grid[j] > best) {
      best = rep.objective_grid[j];
      best_j = j;
    }
  }
  CHECK(rep.policy.tau0 == doctest::Approx(rep.tau0_grid[best_j]).epsilon(1e-15));
  CHECK(rep.objective_value == doctest::Approx(best).epsilon(1e-9));
  CHECK(rep.policy.beam.norm() == doctest::Approx(1.0).epsilon(1e-12));

  for (const auto& key : {"water_level_spread", "budget_exhaustion",
                          "time_identity", "time_budget", "transmit_power"}) {
    REQUIRE(rep.kkt_residuals.count(key) == 1);
    CHECK(rep.kkt_residuals.at(key) < 1e-6);
  }
}

TEST_CASE("solve objective rises with the transmit power cap") {
  SolverOptions opts;
  opts.beam_multistarts = 0;
  double prev = -1.0;
  for (double dbm : {25.0, 30.0, 35.0}) {
    ScenarioConfig cfg = desk_config(3);
    cfg.p_max_dbm = dbm;
    const SolveReport rep = solve(generate_scenario(cfg, 77), opts);
    CHECK(rep.objective_value > prev);
    prev = rep.objective_value;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("an infeasible network yields the all-idle plan at zero charging time") {
  Scenario sc = hand_scenario();
  sc.p_c_w[0] = 1.0;  // static drain far above anything harvestable
  SolverOptions opts;
  opts.tau0_grid_points = 10;
  opts.beam_multistarts = 0;

  for (Objective obj : {Objective::max_sum, Objective::max_min}) {
    opts.objective = obj;
    const SolveReport rep = solve(sc, opts);
    CHECK(rep.objective_value == 0.0);
    CHECK(rep.policy.tau0 == 0.0);  // ties break toward the smaller charging time
    CHECK(rep.policy.tau[0] == 0.0);
    CHECK_FALSE(rep.feasible_users[0]);
  }
}

TEST_CASE("solver options are validated") {
  const Scenario sc = hand_scenario();
  SolverOptions opts;
  opts.tau0_grid_points = 1;
  CHECK_THROWS_AS(solve(sc, opts), ConfigError);
  opts = SolverOptions{};
  opts.bisection_tol = 0.0;
  CHECK_THROWS_AS(solve(sc, opts), ConfigError);
  opts = SolverOptions{};
  opts.beam_multistarts = -1;
  CHECK_THROWS_AS(solve(sc, opts), ConfigError);
  opts = SolverOptions{};
  opts.sca_max_iters = 0;
  CHECK_THROWS_AS(sca_solve_fixed_tau0(sc, 0.4, ComplexVector::Ones(2),
                                       Objective::max_sum, opts),
                  ConfigError);
}

TEST_CASE("single-device beam search picks the dominant transmit direction") {
  RandomStream rng(808);
  Scenario sc;
  sc.n_t = 4;
  sc.n_r = 2;
  sc.n_u = 2;
  sc.p_max_w = 1.0;
  sc.t_max_s = 1.0;
  sc.sigma_n2_w = 1e-6;
  UserChannel u;
  u.g_hat = ComplexMatrix(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) u.g_hat(r, c) = 0.05 * rng.complex_normal();
  u.h_hat = ComplexMatrix(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) u.h_hat(r, c) = 0.01 * rng.complex_normal();
  u.g_radius = 0.01;
  u.h_radius = 0.001;
  sc.users.push_back(u);
  sc.eh.push_back(EhParams(0.024, 150.0, 0.014));
  sc.eps.push_back(5.0);
  sc.p_c_w.push_back(1e-7);

  Eigen::JacobiSVD<ComplexMatrix> svd(u.g_hat, Eigen::ComputeThinU);
  const ComplexVector dominant = svd.matrixU().col(0);

  SolverOptions opts;
  opts.beam_multistarts = 0;
  const ComplexVector plain = optimize_beam(sc, 0.5, Objective::max_sum, opts);
  CHECK(std::abs(plain.dot(dominant)) == doctest::Approx(1.0).epsilon(1e-12));

  opts.beam_multistarts = 2;
  const ComplexVector refined = optimize_beam(sc, 0.5, Objective::max_sum, opts);
  CHECK(std::abs(refined.dot(dominant)) > 1.0 - 1e-6);
}

TEST_CASE("design schemes transform the scenario as documented") {
  ScenarioConfig cfg = desk_config(3);
  cfg.sigma_est2 = 0.0;
  const Scenario clean = generate_scenario(cfg, 13);
  SolverOptions opts;
  opts.beam_multistarts = 0;

  const SolveReport prop = solve(clean, opts);

  // With no uncertainty, ignoring it changes nothing.
  opts.scheme = Scheme::non_robust;
  const SolveReport nonrob = baseline_solve(clean, opts);
  CHECK(nonrob.objective_value == prop.objective_value);
  CHECK(nonrob.policy.tau0 == prop.policy.tau0);

  // With exact estimates, knowing the truth changes nothing either.
  opts.scheme = Scheme::perfect_csi;
  const SolveReport perfect = baseline_solve(clean, opts);
  CHECK(perfect.objective_value == prop.objective_value);

  // The linear-harvester design works from different budgets.
  opts.scheme = Scheme::linear_baseline;
  const SolveReport linear = baseline_solve(clean, opts);
  CHECK(linear.objective_value >= 0.0);
  CHECK(linear.objective_value != prop.objective_value);

  // Perfect CSI requires the realizations to be present.
  Scenario stripped = clean;
  for (auto& usr : stripped.users) {
    usr.g_true.resize(0, 0);
    usr.h_true.resize(0, 0);
  }
  SolverOptions pc;
  pc.scheme = Scheme::perfect_csi;
  CHECK_THROWS_AS(baseline_solve(stripped, pc), std::domain_error);
}

TEST_CASE("successive approximation converges to the direct solution") {
  const Scenario sc = generate_scenario(desk_config(2), 31);
  SolverOptions opts;
  opts.beam_multistarts = 0;
  const SolveReport grid = solve(sc, opts);
  REQUIRE(grid.objective_value > 0.0);
  const double tau0 = grid.policy.tau0;
  const ComplexVector beam = grid.policy.beam;

  const SolveReport direct = solve_fixed_tau0(sc, tau0, beam, Objective::max_sum);

  // Anchored at the achieved operating point: immediate fixed point.
  const SolveReport warm = sca_solve_fixed_tau0(
      sc, tau0, beam, Objective::max_sum, SolverOptions{}, direct.policy.theta);
  CHECK(warm.sca_iterations == 1);
  CHECK(warm.objective_value == direct.objective_value);

  // Default (turn-on) anchors: one corrective pass, then the fixed point.
  const SolveReport cold =
      sca_solve_fixed_tau0(sc, tau0, beam, Objective::max_sum, SolverOptions{});
  CHECK(cold.sca_iterations <= 2);
  CHECK(cold.objective_value == direct.objective_value);
  CHECK(cold.sca_objective_history.size() ==
        static_cast<std::size_t>(cold.sca_iterations));
  CHECK(cold.sca_objective_history.back() == cold.objective_value);

  // Anchoring below the harvester knee is flagged.
  const std::vector<double> low(sc.users.size(), 0.5 * sc.eh[0].turn_on_w);
  const SolveReport warned = sca_solve_fixed_tau0(sc, tau0, beam,
                                                  Objective::max_sum,
                                                  SolverOptions{}, low);
  CHECK_FALSE(warned.warnings.empty());

  CHECK_THROWS_AS(sca_solve_fixed_tau0(sc, tau0, beam, Objective::max_sum,
                                       SolverOptions{}, {1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(
      sca_solve_fixed_tau0(sc, tau0, beam, Objective::max_sum, SolverOptions{},
                           std::vector<double>(sc.users.size(), -1.0)),
      std::domain_error);
}

TEST_CASE("policy evaluation agrees with the design under design assumptions") {
  const Scenario sc = generate_scenario(desk_config(3), 57);
  SolverOptions opts;
  opts.beam_multistarts = 0;
  const SolveReport rep = solve(sc, opts);
  REQUIRE(rep.objective_value > 0.0);

  const auto rates = evaluate_policy(rep.policy, sc, EhEvalMode::nonlinear(),
                                     CsiEvalMode::worst_case());
  REQUIRE(rates.size() == sc.users.size());
  for (std::size_t k = 0; k < rates.size(); ++k) {
    CHECK(rates[k] == doctest::Approx(rep.policy.rates[k]).epsilon(1e-9));
  }

  // Evaluating against the realizations can only help a worst-case design.
  std::vector<ComplexMatrix> dg, dh;
  for (const auto& usr : sc.users) {
    dg.push_back(usr.g_true - usr.g_hat);
    dh.push_back(usr.h_true - usr.h_hat);
  }
  const auto achieved =
      evaluate_policy(rep.policy, sc, EhEvalMode::nonlinear(),
                      CsiEvalMode::sampled_errors(dg, dh));
  double sum_ach = 0.0, sum_des = 0.0;
  for (std::size_t k = 0; k < achieved.size(); ++k) {
    sum_ach += achieved[k];
    sum_des += rep.policy.rates[k];
  }
  CHECK(sum_ach >= sum_des * (1.0 - 1e-9));
}

TEST_CASE("policy evaluation scales overspending plans back to the budget") {
  const Scenario sc = hand_scenario();
  ComplexVector beam(2);
  beam << 1.0, 0.0;
  const SolveReport rep = solve_fixed_tau0(sc, 0.4, beam, Objective::max_sum);
  REQUIRE(rep.objective_value > 0.0);

  // Doubling the planned powers halves the applied scale: the product is
  // unchanged, so the realized rate must be identical.
  AllocationPolicy greedy = rep.policy;
  greedy.lambda[0] *= 2.0;
  const auto rates = evaluate_policy(greedy, sc, EhEvalMode::nonlinear(),
                                     CsiEvalMode::worst_case());
  CHECK(rates[0] == doctest::Approx(rep.policy.rates[0]).epsilon(1e-9));

  // A hopeless energy balance yields zero rate.
  Scenario drained = sc;
  drained.p_c_w[0] = 1.0;
  const auto zero = evaluate_policy(rep.policy, drained, EhEvalMode::nonlinear(),
                                    CsiEvalMode::worst_case());
  CHECK(zero[0] == 0.0);

  // The linear evaluation model responds to eta.
  const auto lin_half = evaluate_policy(rep.policy, sc,
                                        EhEvalMode::linear_model(0.5),
                                        CsiEvalMode::worst_case());
  const auto lin_full = evaluate_policy(rep.policy, sc,
                                        EhEvalMode::linear_model(1.0),
                                        CsiEvalMode::worst_case());
  CHECK(lin_full[0] >= lin_half[0]);

  AllocationPolicy bad = rep.policy;
  bad.tau.push_back(0.1);
  CHECK_THROWS_AS(evaluate_policy(bad, sc, EhEvalMode::nonlinear(),
                                  CsiEvalMode::worst_case()),
                  std::domain_error);
  CHECK_THROWS_AS(evaluate_policy(rep.policy, sc, EhEvalMode::nonlinear(),
                                  CsiEvalMode::sampled_errors({}, {})),
                  std::domain_error);
}

TEST_CASE("re-running the optimality checks reproduces the embedded residuals") {
  const Scenario sc = generate_scenario(desk_config(2), 63);
  SolverOptions opts;
  opts.beam_multistarts = 0;
  const SolveReport rep = solve(sc, opts);
  const auto res = verify_kkt(rep, sc);
  REQUIRE(res.size() == rep.kkt_residuals.size());
  for (const auto& [key, value] : res) {
    REQUIRE(rep.kkt_residuals.count(key) == 1);
    CHECK(value == rep.kkt_residuals.at(key));
  }
}
