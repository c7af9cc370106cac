#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbopt/chaos.hpp"
#include "sbopt/engine.hpp"

// Benchmark statistics and experiment drivers: success probability with its
// binomial error, time to solution, batch best-of processing, (M, A) and
// (D_t, t_M) sweep grids, and the accelerator clock-cycle model.

namespace sbopt {

struct SuccessStats {
  double p_s = 0.0;
  double delta_p_s = 0.0;  // sqrt((p_s - p_s^2)/n_rep)
  std::size_t n_rep = 0;
  double target_value = 0.0;
  std::size_t hit_count = 0;
};

enum class HitKind { energy_min, cut_max };

// Hit = energy <= target (energy_min) or cut >= target (cut_max). Exact
// comparisons; energies of integral instances are exact in double.
SuccessStats success_probability(std::span<const RunResult> results, double target,
                                 HitKind kind);
SuccessStats success_probability(std::span<const double> energies, double target);
SuccessStats success_from_counts(std::size_t hit_count, std::size_t n_rep, double target);

struct TtsResult {
  double tts_s = 0.0;
  double delta_tts_s = 0.0;
  double t_com_s = 0.0;
  SuccessStats stats;
};

// TTS = t_com * ln(0.01)/ln(1 - p_s), or t_com itself when p_s > 0.99;
// delta_tts = tts * delta_p_s / ((1 - p_s) |ln(1 - p_s)|) (0 on the t_com
// branch). p_s = 0 is an error: the TTS is undefined.
TtsResult time_to_solution(double t_com_s, const SuccessStats& stats);

// n_batch replicas with seeds derive_seed(master, {batch, r}); returns the
// minimum-energy result (ties to the lowest replica index) with wall_time_s
// replaced by the elapsed time of the whole concurrent batch.
RunResult batch_best_of(const IsingInstance& instance, const SolverConfig& cfg,
                        const TuningResult& tuning, std::size_t n_batch,
                        std::uint64_t master_seed, unsigned workers = 1,
                        const CutGraph* graph = nullptr);

struct CycleModel {
  std::uint64_t n = 0;
  std::uint64_t p_r = 1, p_c = 1, p_b = 1;
  std::uint64_t latency = 0;
  std::uint64_t n_cyc = 0;
  std::optional<double> f_sys_hz;
  std::optional<double> step_time_s;
};

// N_cyc = N^2/(P_r P_c P_b) + P_b P_r / P_c + latency, exact integer
// arithmetic; both divisions must be exact. step_time = N_cyc / f_sys when a
// clock frequency is given.
CycleModel cycle_count(std::uint64_t n, std::uint64_t p_r, std::uint64_t p_c, std::uint64_t p_b,
                       std::uint64_t latency, std::optional<double> f_sys_hz = {});

struct SweepCell {
  std::size_t mi = 0, ai = 0;  // axis indices
  std::uint64_t m_steps = 0;
  double a = 0.0;
  SuccessStats stats;
  double mean_energy = 0.0;
  double best_energy = 0.0;
  std::vector<double> energies;  // per-replica final energies, replica order
};

struct SweepGrid {
  std::vector<std::uint64_t> axis_m;
  std::vector<double> axis_a;
  std::vector<SweepCell> cells;  // row-major, M outer, A inner
  std::string instance_label;
  SolverConfig config_base;
  double target = 0.0;
  std::size_t reps = 0;
};

using SweepCellSink = std::function<void(const SweepCell&)>;
using SweepCellSkip = std::function<bool(std::size_t mi, std::size_t ai)>;

// One grid cell: reps runs at (M, A) with seeds derive_seed(master,
// {sweep, mi, ai, r}), master = cfg_base.seed. Replicas run in parallel.
SweepCell run_sweep_cell(const IsingInstance& instance, std::uint64_t m_steps, double a,
                         std::size_t mi, std::size_t ai, std::size_t reps,
                         const SolverConfig& cfg_base, const TuningResult& tuning, double target,
                         ThreadPool& pool);

// Full (M, A) grid. Cells complete in deterministic row-major order; the
// sink fires after each cell so long sweeps can stream partial results, and
// skip(mi, ai) == true omits a cell (resumption support: skipped cells do
// not appear in the returned grid).
SweepGrid sweep(const IsingInstance& instance, std::vector<std::uint64_t> m_values,
                std::vector<double> a_values, std::size_t reps, const SolverConfig& cfg_base,
                const TuningResult& tuning, double target, unsigned workers = 1,
                const SweepCellSink& sink = {}, const SweepCellSkip& skip = {});

// Recomputes per-cell statistics against a new target from stored energies.
void restat(SweepGrid& grid, double target);

struct DtSweepCell {
  std::size_t di = 0, ti = 0;
  double d_t_factor = 0.0;
  double t_final = 0.0;
  double dt = 0.0;
  std::uint64_t m_steps = 0;
  SuccessStats stats;
  double mean_energy = 0.0;
  double best_energy = 0.0;
  std::vector<double> energies;
};

struct DtSweepGrid {
  std::vector<double> axis_d_t;
  std::vector<double> axis_t_final;
  std::vector<DtSweepCell> cells;  // row-major, D_t outer, t_M inner
  std::string instance_label;
  SolverConfig config_base;
  double target = 0.0;
  std::size_t reps = 0;
};

using DtSweepCellSink = std::function<void(const DtSweepCell&)>;

// Discretization-independence grid: per cell, dt = tune_dt(lambda_min,
// lambda_max, D_t) from the tuning source and M = round(t_M / dt) (M == 0 is
// an error). Seeds derive_seed(master, {dt_sweep, di, ti, r}).
DtSweepGrid dt_sweep(const IsingInstance& instance, std::vector<double> d_t_values,
                     std::vector<double> t_final_values, double a, std::size_t reps,
                     const SolverConfig& cfg_base, const TuningResult& tuning, double target,
                     unsigned workers = 1, const DtSweepCellSink& sink = {});

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepCell& cell);
std::string dt_sweep_csv_header();
std::string dt_sweep_csv_row(const DtSweepCell& cell);

// Grid summary with config echo and environment metadata.
std::string sweep_summary_json(const SweepGrid& grid, unsigned workers);
std::string dt_sweep_summary_json(const DtSweepGrid& grid, unsigned workers);

}  // namespace sbopt
