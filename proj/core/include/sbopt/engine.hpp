#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbopt/model.hpp"
#include "sbopt/parallel.hpp"
#include "sbopt/spectral.hpp"

// Time-evolution core: symplectic-Euler stepping of the oscillator network
// with inelastic walls at +-1 and per-oscillator bifurcation parameters.
// One step runs four phases in order, each reading only the previous phase:
//   p-phase:    p_i <- p_i - (1 - a x_i^2) p_i / (M - m)
//   y-phase:    y_i <- y_i - (p_i x_i - c sum_j J_ij g(x_j)) dt
//   x-phase:    x_i <- x_i + y_i dt
//   wall-phase: |x_i| > 1  ->  x_i <- sgn(x_i), y_i <- 0
// g(x) = x for bsb/gbsb and sgn(x) for dsb; a is forced to 0 for bsb/dsb,
// which makes the per-index p updates collapse to the shared linear schedule.

namespace sbopt {

enum class Variant { bsb, dsb, gbsb };
enum class InitMode { uniform_random, chaos_probe };

struct SolverConfig {
  Variant variant = Variant::gbsb;
  std::uint64_t steps = 1000;  // M
  std::optional<double> dt;    // taken from the tuning result when unset
  std::optional<double> c;
  double a = 0.0;  // nonlinear-control strength A; ignored for bsb/dsb
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::uniform_random;
  std::uint64_t sample_stride = 0;  // 0 = record the final state only
};

struct SolverState {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> p;
  std::uint64_t m = 0;

  std::size_t size() const noexcept { return x.size(); }
};

struct TrajectorySample {
  std::uint64_t m = 0;
  std::vector<double> x;

  bool operator==(const TrajectorySample&) const = default;
};

struct RunResult {
  SpinConfig final_spins;
  double energy = 0.0;
  std::optional<long long> cut;
  double wall_time_s = 0.0;
  std::vector<TrajectorySample> trajectory;
  SolverConfig config_echo;  // resolved dt/c, replica seed
  TuningResult tuning_echo;
};

// uniform_random: x_i ~ U(-1, 1); chaos_probe: x_i = +-0.1 with random sign.
// Momenta start at zero and every bifurcation parameter at one.
SolverState init_state(std::size_t n, std::uint64_t seed, InitMode mode);

// One application of the p-phase rule. m must be < steps.
double update_bifurcation(double p_i, double x_i, std::uint64_t m, std::uint64_t steps, double a);

// Fills dt/c from the tuning result where the config leaves them unset.
SolverConfig resolve_config(SolverConfig cfg, const TuningResult& tuning);

// Advances the state by one step (state.m must be < cfg.steps; cfg.dt and
// cfg.c must be set). Per-index work is parallelized over the pool when
// given; results are identical for any worker count.
void step(SolverState& state, const IsingInstance& instance, const SolverConfig& cfg,
          ThreadPool* pool = nullptr);

// init_state + M steps + readout. The cut is filled when the originating
// graph is supplied. With sample_stride > 0 the trajectory records the
// initial state, every stride-th step and the final state. Deterministic in
// (instance, cfg, tuning) except for wall_time_s.
RunResult run(const IsingInstance& instance, const SolverConfig& cfg, const TuningResult& tuning,
              const CutGraph* graph = nullptr, ThreadPool* pool = nullptr);

// Raw symplectic-Euler update of one harmonic oscillator with spring
// constant k (no walls): y <- y - k x dt; x <- x + y dt. This is the
// single-oscillator skeleton of the stepping rule; it oscillates boundedly
// iff dt < 2/sqrt(k).
inline void symplectic_harmonic_step(double& x, double& y, double k, double dt) {
  y -= k * x * dt;
  x += y * dt;
}

// Run-length encoding for spin vectors: list of [value, count] pairs.
std::vector<std::pair<int, std::uint64_t>> rle_encode(const SpinConfig& spins);
SpinConfig rle_decode(const std::vector<std::pair<int, std::uint64_t>>& runs);

// JSON manifest with config, tuning, seed, energy, cut and wall time;
// everything needed to reproduce the run.
std::string run_manifest_json(const RunResult& result, const std::string& instance_label,
                              bool rle_spins = false);

const char* to_string(Variant v) noexcept;
const char* to_string(InitMode m) noexcept;
const char* to_string(SpectralMethod m) noexcept;

}  // namespace sbopt
