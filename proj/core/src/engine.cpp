#include "sbopt/engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "kernels.hpp"
#include "sbopt/rng.hpp"

namespace sbopt {

namespace {

void validate(const SolverConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("step count M must be >= 1");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfg.c && !(*cfg.c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(cfg.a >= 0.0)) throw std::invalid_argument("A must be >= 0");
}

}  // namespace

SolverState init_state(std::size_t n, std::uint64_t seed, InitMode mode) {
  if (n < 1) throw std::invalid_argument("state size must be >= 1");
  SolverState state;
  state.x.resize(n);
  state.y.assign(n, 0.0);
  state.p.assign(n, 1.0);
  state.m = 0;
  Xoshiro256pp rng(seed);
  if (mode == InitMode::uniform_random) {
    for (double& xi : state.x) xi = rng.uniform_symmetric();
  } else {
    for (double& xi : state.x) xi = 0.1 * rng.random_sign();
  }
  return state;
}

double update_bifurcation(double p_i, double x_i, std::uint64_t m, std::uint64_t steps,
                          double a) {
  if (m >= steps) throw std::invalid_argument("bifurcation update past the final step");
  const double denom = static_cast<double>(steps - m);
  return p_i - (1.0 - a * x_i * x_i) * p_i / denom;
}

SolverConfig resolve_config(SolverConfig cfg, const TuningResult& tuning) {
  if (!cfg.dt) cfg.dt = tuning.dt;
  if (!cfg.c) cfg.c = tuning.c;
  validate(cfg);
  return cfg;
}

void step(SolverState& state, const IsingInstance& instance, const SolverConfig& cfg,
          ThreadPool* pool) {
  const std::size_t n = instance.n();
  if (state.size() != n) throw std::invalid_argument("state size does not match instance");
  if (state.m >= cfg.steps) throw std::invalid_argument("state already at the final step");
  if (!cfg.dt || !cfg.c) throw std::invalid_argument("config has unresolved dt/c");

  const double dt = *cfg.dt;
  const double c = *cfg.c;
  const double a = cfg.variant == Variant::gbsb ? cfg.a : 0.0;
  const double denom = static_cast<double>(cfg.steps - state.m);

  thread_local std::vector<double> jx;
  thread_local std::vector<double> gx;
  jx.resize(n);

  // Interaction sum on the pre-step positions.
  const double* gx_ptr = state.x.data();
  if (cfg.variant == Variant::dsb) {
    gx.resize(n);
    for (std::size_t i = 0; i < n; ++i) gx[i] = state.x[i] >= 0.0 ? 1.0 : -1.0;
    gx_ptr = gx.data();
  }
  detail::coupling_matvec(instance, gx_ptr, jx.data(), pool);

  // Remaining phases are independent per index; x_i is read at t_m because
  // it is overwritten only after p_i and y_i are done with it.
  double* x = state.x.data();
  double* y = state.y.data();
  double* p = state.p.data();
  const double* jxv = jx.data();
  auto phases = [=](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double xi = x[i];
      const double pi = p[i] - (1.0 - a * xi * xi) * p[i] / denom;
      p[i] = pi;
      double yi = y[i] - (pi * xi - c * jxv[i]) * dt;
      double xn = xi + yi * dt;
      if (xn > 1.0) {
        xn = 1.0;
        yi = 0.0;
      } else if (xn < -1.0) {
        xn = -1.0;
        yi = 0.0;
      }
      x[i] = xn;
      y[i] = yi;
    }
  };
  if (pool != nullptr && pool->workers() > 1) {
    pool->for_chunks(n, phases);
  } else {
    phases(0, n);
  }
  ++state.m;
}

RunResult run(const IsingInstance& instance, const SolverConfig& cfg, const TuningResult& tuning,
              const CutGraph* graph, ThreadPool* pool) {
  const SolverConfig rcfg = resolve_config(cfg, tuning);

  const auto t0 = std::chrono::steady_clock::now();
  SolverState state = init_state(instance.n(), rcfg.seed, rcfg.init_mode);

  RunResult result{.final_spins = SpinConfig::unchecked({})};
  if (rcfg.sample_stride > 0) result.trajectory.push_back({state.m, state.x});
  for (std::uint64_t m = 0; m < rcfg.steps; ++m) {
    step(state, instance, rcfg, pool);
    if (rcfg.sample_stride > 0 && state.m % rcfg.sample_stride == 0) {
      result.trajectory.push_back({state.m, state.x});
    }
  }
  if (rcfg.sample_stride > 0 && result.trajectory.back().m != state.m) {
    result.trajectory.push_back({state.m, state.x});
  }

  result.final_spins = signs_from_positions(state.x);
  result.energy = ising_energy(instance, result.final_spins);
  if (graph != nullptr) result.cut = cut_value(*graph, result.final_spins);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.config_echo = rcfg;
  result.tuning_echo = tuning;
  return result;
}

std::vector<std::pair<int, std::uint64_t>> rle_encode(const SpinConfig& spins) {
  std::vector<std::pair<int, std::uint64_t>> runs;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const int v = spins[i];
    if (!runs.empty() && runs.back().first == v) {
      ++runs.back().second;
    } else {
      runs.push_back({v, 1});
    }
  }
  return runs;
}

SpinConfig rle_decode(const std::vector<std::pair<int, std::uint64_t>>& runs) {
  std::vector<std::int8_t> spins;
  for (const auto& [v, count] : runs) {
    if (v != 1 && v != -1) throw std::invalid_argument("run value must be +1 or -1");
    spins.insert(spins.end(), count, static_cast<std::int8_t>(v));
  }
  return SpinConfig::unchecked(std::move(spins));
}

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::bsb: return "bsb";
    case Variant::dsb: return "dsb";
    case Variant::gbsb: return "gbsb";
  }
  return "?";
}

const char* to_string(InitMode m) noexcept {
  return m == InitMode::uniform_random ? "uniform_random" : "chaos_probe";
}

const char* to_string(SpectralMethod m) noexcept {
  switch (m) {
    case SpectralMethod::power_iteration: return "power_iteration";
    case SpectralMethod::wigner: return "wigner";
    case SpectralMethod::exact_small: return "exact_small";
  }
  return "?";
}

namespace {

nlohmann::json config_json(const SolverConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  j["M"] = cfg.steps;
  if (cfg.dt) j["dt"] = *cfg.dt; else j["dt"] = nullptr;
  if (cfg.c) j["c"] = *cfg.c; else j["c"] = nullptr;
  j["A"] = cfg.a;
  j["seed"] = cfg.seed;
  j["init_mode"] = to_string(cfg.init_mode);
  j["sample_stride"] = cfg.sample_stride;
  return j;
}

nlohmann::json tuning_json(const TuningResult& tuning) {
  nlohmann::json j;
  j["c"] = tuning.c;
  j["dt"] = tuning.dt;
  j["D_t"] = tuning.d_t_factor;
  j["method"] = to_string(tuning.source.method);
  if (std::isfinite(tuning.source.lambda_max)) j["lambda_max"] = tuning.source.lambda_max;
  if (std::isfinite(tuning.source.lambda_min)) j["lambda_min"] = tuning.source.lambda_min;
  return j;
}

}  // namespace

std::string run_manifest_json(const RunResult& result, const std::string& instance_label,
                              bool rle_spins) {
  nlohmann::json doc;
  doc["tool"] = "sbopt";
  doc["instance"] = {{"label", instance_label}, {"n", result.final_spins.size()}};
  doc["config"] = config_json(result.config_echo);
  doc["tuning"] = tuning_json(result.tuning_echo);
  doc["energy"] = result.energy;
  if (result.cut) doc["cut"] = *result.cut; else doc["cut"] = nullptr;
  doc["wall_time_s"] = result.wall_time_s;
  if (rle_spins) {
    auto runs = nlohmann::json::array();
    for (const auto& [v, count] : rle_encode(result.final_spins)) runs.push_back({v, count});
    doc["spins_rle"] = std::move(runs);
  } else {
    auto spins = nlohmann::json::array();
    for (std::size_t i = 0; i < result.final_spins.size(); ++i) {
      spins.push_back(static_cast<int>(result.final_spins[i]));
    }
    doc["spins"] = std::move(spins);
  }
  return doc.dump();
}

}  // namespace sbopt
