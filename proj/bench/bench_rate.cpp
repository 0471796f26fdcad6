// Serial vs OpenMP Monte-Carlo throughput on the reference scenario.
// Run: ./bench/bench_rate [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "lrmimo/receiver.hpp"

using namespace lrmimo;

namespace {

void bm_monte_carlo_serial(benchmark::State& state) {
  const SystemConfig cfg =
      SystemConfig::symmetric(static_cast<int>(state.range(0)), 50, 1.0, 1);
  const int trials = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto result = monte_carlo_rate_serial(cfg, trials, 1, SinrMode::ApproxDiagonal);
    benchmark::DoNotOptimize(result.average);
  }
  state.SetItemsProcessed(state.iterations() * trials);
}

void bm_monte_carlo_openmp(benchmark::State& state) {
  const SystemConfig cfg =
      SystemConfig::symmetric(static_cast<int>(state.range(0)), 50, 1.0, 1);
  const int trials = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto result = monte_carlo_rate(cfg, trials, 1, SinrMode::ApproxDiagonal);
    benchmark::DoNotOptimize(result.average);
  }
  state.SetItemsProcessed(state.iterations() * trials);
}

}  // namespace

BENCHMARK(bm_monte_carlo_serial)->Args({100, 64})->Args({200, 64})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_monte_carlo_openmp)->Args({100, 64})->Args({200, 64})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
