#include <benchmark/benchmark.h>

#include "fraudgame/dynamics.hpp"
#include "fraudgame/gaussians.hpp"
#include "fraudgame/verify.hpp"

using namespace fraudgame;

static void BM_InverseSf(benchmark::State& state) {
  double q = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian::inverse_sf(q));
    q = q < 0.7 ? q * 1.37 : 1e-9;
  }
}
BENCHMARK(BM_InverseSf);

static void BM_LambdaStar(benchmark::State& state) {
  const auto eq = solve({0.05, state.range(0) == 0 ? 3.0 : 5.0, 0.3});
  double p = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_star(eq, p));
    p = p < 0.95 ? p + 0.013 : 0.01;
  }
}
BENCHMARK(BM_LambdaStar)->Arg(0)->Arg(1);

static void BM_BeliefStep(benchmark::State& state) {
  const auto eq = solve({0.05, 3.0, 0.3});
  RngStream rng(1, 0);
  double p = 0.3;
  for (auto _ : state) {
    p = belief_step(eq, p, 1, lambda_star(eq, p), 1e-3, rng.normal());
    if (p > 0.6) p = 0.3;
  }
  benchmark::DoNotOptimize(p);
}
BENCHMARK(BM_BeliefStep);

static void BM_SimulatePath(benchmark::State& state) {
  const ModelParams params{0.05, state.range(0) == 0 ? 3.0 : 5.0, 0.3};
  const auto eq = solve(params);
  PathConfig config;
  config.horizon = 10.0;
  const StopperStrategy never = stopper::Never{};
  std::uint64_t i = 0;
  for (auto _ : state) {
    RngStream rng(1, i++);
    benchmark::DoNotOptimize(simulate_path(params, eq, fraud::EquilibriumRate{}, never, 1, config, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.steps()));
}
BENCHMARK(BM_SimulatePath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ResidualSuite(benchmark::State& state) {
  const auto eq = solve({0.05, state.range(0) == 0 ? 3.0 : 5.0, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(residual_suite(eq));
}
BENCHMARK(BM_ResidualSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
