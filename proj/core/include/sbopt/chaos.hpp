#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbopt/engine.hpp"

// Edge-of-chaos diagnostics: evolve two trajectories started 1e-6 apart (in
// normalized distance) and track delta(t) = sqrt(sum_i (x1_i - x2_i)^2/(4N)).
// delta(t_M) ~ 0 indicates regular dynamics; delta(t_M) ~ 1/sqrt(2) indicates
// chaos (positions scrambled to independent +-1).

namespace sbopt {

struct DivergenceRecord {
  double a = 0.0;
  std::vector<std::pair<std::uint64_t, double>> deltas;  // (m, delta(t_m))
  double final_delta = 0.0;
  std::uint64_t seed = 0;
};

// Trajectory 1: x_i = +-0.1, random sign. Trajectory 2: x_i plus a 2e-6
// perturbation with independent random sign. Momenta zero, bifurcation
// parameters one. The construction gives delta(0) = 1e-6.
std::pair<SolverState, SolverState> paired_initial_conditions(std::size_t n, std::uint64_t seed);

// sqrt( sum_i (x1_i - x2_i)^2 / (4N) ); in [0, 1] for walled positions.
double normalized_distance(std::span<const double> x1, std::span<const double> x2);

// Evolves the paired trajectories under one config (variant must be gbsb;
// A >= 0 selects the probed control strength). delta is recorded at m = 0,
// every sample_stride steps (default 100 when the config leaves it 0) and at
// the final step.
DivergenceRecord divergence_run(const IsingInstance& instance, const SolverConfig& cfg,
                                const TuningResult& tuning, std::uint64_t seed,
                                ThreadPool* pool = nullptr);

struct ChaosScanRow {
  double a = 0.0;
  double mean_final_delta = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;  // master seed of the scan
  std::vector<double> final_deltas;
};

// reps divergence runs per A value with seeds derived from cfg_base.seed;
// rows come back in a_values order. Deterministic in the master seed.
std::vector<ChaosScanRow> chaos_scan(const IsingInstance& instance,
                                     std::span<const double> a_values, std::size_t reps,
                                     const SolverConfig& cfg_base, const TuningResult& tuning,
                                     unsigned workers = 1);

std::string chaos_csv_header();
std::string chaos_csv_row(const ChaosScanRow& row);

}  // namespace sbopt
