#include "sbopt/chaos.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sbopt/rng.hpp"

namespace sbopt {

std::pair<SolverState, SolverState> paired_initial_conditions(std::size_t n,
                                                              std::uint64_t seed) {
  SolverState first = init_state(n, seed, InitMode::chaos_probe);
  SolverState second = first;
  Xoshiro256pp rng(derive_seed(seed, {seed_stream::chaos_perturb}));
  for (double& xi : second.x) xi += 2e-6 * rng.random_sign();
  return {std::move(first), std::move(second)};
}

double normalized_distance(std::span<const double> x1, std::span<const double> x2) {
  if (x1.size() != x2.size()) throw std::invalid_argument("trajectory lengths differ");
  if (x1.empty()) throw std::invalid_argument("empty trajectories");
  double sum = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double d = x1[i] - x2[i];
    sum += d * d;
  }
  return std::sqrt(sum / (4.0 * static_cast<double>(x1.size())));
}

namespace {

DivergenceRecord divergence_run_impl(const IsingInstance& instance, const SolverConfig& rcfg,
                                     std::uint64_t seed, ThreadPool* pool) {
  const std::uint64_t stride = rcfg.sample_stride > 0 ? rcfg.sample_stride : 100;

  auto [s1, s2] = paired_initial_conditions(instance.n(), seed);
  DivergenceRecord record;
  record.a = rcfg.a;
  record.seed = seed;
  record.deltas.push_back({0, normalized_distance(s1.x, s2.x)});
  for (std::uint64_t m = 0; m < rcfg.steps; ++m) {
    step(s1, instance, rcfg, pool);
    step(s2, instance, rcfg, pool);
    if (s1.m % stride == 0 || s1.m == rcfg.steps) {
      record.deltas.push_back({s1.m, normalized_distance(s1.x, s2.x)});
    }
  }
  record.final_delta = record.deltas.back().second;
  return record;
}

}  // namespace

DivergenceRecord divergence_run(const IsingInstance& instance, const SolverConfig& cfg,
                                const TuningResult& tuning, std::uint64_t seed,
                                ThreadPool* pool) {
  if (cfg.variant != Variant::gbsb) {
    throw std::invalid_argument("divergence runs probe the gbsb variant");
  }
  const SolverConfig rcfg = resolve_config(cfg, tuning);
  return divergence_run_impl(instance, rcfg, seed, pool);
}

std::vector<ChaosScanRow> chaos_scan(const IsingInstance& instance,
                                     std::span<const double> a_values, std::size_t reps,
                                     const SolverConfig& cfg_base, const TuningResult& tuning,
                                     unsigned workers) {
  if (reps < 1) throw std::invalid_argument("chaos scan needs reps >= 1");
  SolverConfig base = cfg_base;
  base.variant = Variant::gbsb;
  const SolverConfig rbase = resolve_config(base, tuning);

  std::vector<ChaosScanRow> rows;
  rows.reserve(a_values.size());
  ThreadPool pool(workers);
  for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
    SolverConfig cfg = rbase;
    cfg.a = a_values[ai];
    ChaosScanRow row;
    row.a = cfg.a;
    row.reps = reps;
    row.seed = cfg_base.seed;
    row.final_deltas.resize(reps);
    pool.for_each_index(reps, [&](std::size_t r) {
      const std::uint64_t seed =
          derive_seed(cfg_base.seed, {seed_stream::chaos, ai, r});
      row.final_deltas[r] = divergence_run_impl(instance, cfg, seed, nullptr).final_delta;
    });
    double mean = 0.0;
    for (double d : row.final_deltas) mean += d;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (double d : row.final_deltas) var += (d - mean) * (d - mean);
    row.mean_final_delta = mean;
    row.std_error =
        reps > 1 ? std::sqrt(var / static_cast<double>(reps - 1) / static_cast<double>(reps))
                 : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string chaos_csv_header() { return "a,mean_final_delta,stderr,reps,seed"; }

std::string chaos_csv_row(const ChaosScanRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%zu,%llu", row.a, row.mean_final_delta,
                row.std_error, row.reps, static_cast<unsigned long long>(row.seed));
  return buf;
}

}  // namespace sbopt
