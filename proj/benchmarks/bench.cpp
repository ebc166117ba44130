#include <benchmark/benchmark.h>

#include <random>

#include "wpcn/allocator.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/eh_model.hpp"

namespace {

void BM_HarvestNonlinear(benchmark::State& state) {
  const wpcn::EhParams curve{0.024, 1500.0, 0.0022};
  double input = 0.0;
  for (auto _ : state) {
    input = input < 0.02 ? input + 1e-5 : 0.0;
    benchmark::DoNotOptimize(wpcn::harvest_nonlinear(input, curve));
  }
}
BENCHMARK(BM_HarvestNonlinear);

void BM_Waterfill(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Eigen::VectorXd gains(modes);
  for (int i = 0; i < modes; ++i) gains[i] = std::pow(10.0, 3.0 + 2.0 * U(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wpcn::waterfill(gains, 1e-3));
  }
}
BENCHMARK(BM_Waterfill)->Arg(2)->Arg(4)->Arg(8);

void BM_AllocateTimeSum(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> budgets(devices);
  std::vector<Eigen::VectorXd> gamma_stars(devices);
  std::vector<double> eps(devices, 5.0);
  for (int k = 0; k < devices; ++k) {
    budgets[k] = 1e-3 * (0.5 + U(rng));
    gamma_stars[k] = Eigen::VectorXd(2);
    gamma_stars[k] << 0.01 * (0.5 + U(rng)), 0.005 * (0.5 + U(rng));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wpcn::allocate_time_sum(budgets, gamma_stars, 0.6, 1e-12, eps));
  }
}
BENCHMARK(BM_AllocateTimeSum)->Arg(2)->Arg(4)->Arg(8);

void BM_WorstCaseHarvest(benchmark::State& state) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> N(0.0, 1.0);
  wpcn::ComplexMatrix g(4, 2);
  wpcn::ComplexVector u(4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) g(r, c) = std::complex<double>(N(rng), N(rng));
    u(r) = std::complex<double>(N(rng), N(rng));
  }
  u.normalize();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wpcn::worst_case_harvest_power(g, u, 3.16, 0.4));
  }
}
BENCHMARK(BM_WorstCaseHarvest);

void BM_SolveDeskScale(benchmark::State& state) {
  wpcn::ScenarioConfig config;
  config.user_count = 4;
  const wpcn::Scenario scenario = wpcn::generate_scenario(config, 1);
  wpcn::SolverOptions options;
  options.tau0_grid_points = static_cast<int>(state.range(0));
  options.beam_multistarts = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wpcn::solve(scenario, options));
  }
}
BENCHMARK(BM_SolveDeskScale)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
