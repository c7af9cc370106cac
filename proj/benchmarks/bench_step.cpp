// Microbenchmarks for the O(N^2) stepping kernel and its feeders. The step
// kernel dominates every experiment; counters report effective FLOP/s of the
// interaction sum (2 N^2 per step).

#include <benchmark/benchmark.h>

#include <cmath>

#include "sbopt/bench.hpp"
#include "sbopt/engine.hpp"
#include "sbopt/model.hpp"
#include "sbopt/spectral.hpp"

namespace {

sbopt::SolverConfig step_config(sbopt::Variant variant, std::size_t n) {
  sbopt::SolverConfig cfg;
  cfg.variant = variant;
  cfg.steps = 1u << 30;  // stepping forever; the benchmark loop controls time
  cfg.dt = 1.25;
  cfg.c = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  cfg.a = 0.2;
  return cfg;
}

void bm_step(benchmark::State& state, sbopt::Variant variant, unsigned workers) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = sbopt::gen_random_dense(n, 1);
  const auto cfg = step_config(variant, n);
  auto s = sbopt::init_state(n, 2, sbopt::InitMode::uniform_random);
  sbopt::ThreadPool pool(workers);
  for (auto _ : state) {
    sbopt::step(s, inst, cfg, workers > 1 ? &pool : nullptr);
    benchmark::DoNotOptimize(s.x.data());
  }
  state.counters["flops"] = benchmark::Counter(
      2.0 * static_cast<double>(n) * static_cast<double>(n) *
          static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}

void bm_energy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = sbopt::gen_random_dense(n, 1);
  const auto s = sbopt::signs_from_positions(sbopt::init_state(n, 3, sbopt::InitMode::uniform_random).x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sbopt::ising_energy(inst, s));
  }
}

void bm_extreme_eigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = sbopt::gen_random_dense(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sbopt::extreme_eigenvalues(inst, 1e-4, 100000).lambda_max);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_step, bsb_serial, sbopt::Variant::bsb, 1u)
    ->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_step, dsb_serial, sbopt::Variant::dsb, 1u)
    ->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_step, gbsb_serial, sbopt::Variant::gbsb, 1u)
    ->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_step, gbsb_threaded, sbopt::Variant::gbsb, 0u)
    ->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_energy)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_extreme_eigenvalues)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
