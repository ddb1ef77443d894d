#include <benchmark/benchmark.h>

#include "ossa/advice.hpp"
#include "ossa/engine.hpp"
#include "ossa/instances.hpp"
#include "ossa/offline.hpp"
#include "ossa/policies.hpp"

namespace {

const ossa::Instance& synthetic(std::size_t n, std::size_t horizon) {
  static thread_local std::size_t cached_n = 0, cached_t = 0;
  static thread_local ossa::Instance cached;
  if (cached_n != n || cached_t != horizon) {
    ossa::SyntheticConfig config;
    config.n = n;
    config.horizon = horizon;
    config.rho_grid = {0.5};
    config.seed = 1;
    cached = ossa::gen_synthetic(config).front();
    cached_n = n;
    cached_t = horizon;
  }
  return cached;
}

void BM_RunGpa(benchmark::State& state) {
  const auto& inst = synthetic(state.range(0), state.range(1));
  const ossa::GammaVector gamma = ossa::default_gamma(inst);
  for (auto _ : state) {
    ossa::GpaPolicy gpa(gamma);
    benchmark::DoNotOptimize(ossa::run(inst, gpa).total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_RunGpa)->Args({50, 1000})->Args({50, 10000})->Args({200, 1000});

void BM_RunAlwaysFill(benchmark::State& state) {
  const auto& inst = synthetic(state.range(0), state.range(1));
  for (auto _ : state) {
    ossa::AlwaysFillPolicy fill;
    benchmark::DoNotOptimize(ossa::run(inst, fill).total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_RunAlwaysFill)->Args({50, 1000})->Args({50, 10000});

void BM_LaGpaConstruction(benchmark::State& state) {
  const auto& inst = synthetic(state.range(0), 1000);
  const ossa::Predictions pred = ossa::make_predictions(
      inst, 10.0 * static_cast<double>(inst.supply()), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ossa::gamma_from_predictions(inst, pred, 0.1));
  }
}
BENCHMARK(BM_LaGpaConstruction)->Arg(50)->Arg(1000);

void BM_SolveOffline(benchmark::State& state) {
  const auto& inst = synthetic(state.range(0), 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ossa::solve_offline(inst).cost_relaxed);
  }
}
BENCHMARK(BM_SolveOffline)->Arg(50)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
