#include "sbopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "sbopt/rng.hpp"

namespace sbopt {

SuccessStats success_from_counts(std::size_t hit_count, std::size_t n_rep, double target) {
  if (n_rep == 0) throw std::invalid_argument("success probability needs n_rep >= 1");
  if (hit_count > n_rep) throw std::invalid_argument("hit count exceeds repetitions");
  SuccessStats stats;
  stats.n_rep = n_rep;
  stats.hit_count = hit_count;
  stats.target_value = target;
  stats.p_s = static_cast<double>(hit_count) / static_cast<double>(n_rep);
  stats.delta_p_s =
      std::sqrt((stats.p_s - stats.p_s * stats.p_s) / static_cast<double>(n_rep));
  return stats;
}

SuccessStats success_probability(std::span<const double> energies, double target) {
  if (energies.empty()) throw std::invalid_argument("no results");
  std::size_t hits = 0;
  for (double e : energies) {
    if (e <= target) ++hits;
  }
  return success_from_counts(hits, energies.size(), target);
}

SuccessStats success_probability(std::span<const RunResult> results, double target,
                                 HitKind kind) {
  if (results.empty()) throw std::invalid_argument("no results");
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (kind == HitKind::energy_min) {
      if (r.energy <= target) ++hits;
    } else {
      if (!r.cut) throw std::invalid_argument("cut_max target needs cut values in results");
      if (static_cast<double>(*r.cut) >= target) ++hits;
    }
  }
  return success_from_counts(hits, results.size(), target);
}

TtsResult time_to_solution(double t_com_s, const SuccessStats& stats) {
  if (!(t_com_s > 0.0)) throw std::invalid_argument("t_com must be positive");
  if (!(stats.p_s > 0.0)) throw std::invalid_argument("TTS undefined for p_s = 0");
  TtsResult result;
  result.t_com_s = t_com_s;
  result.stats = stats;
  if (stats.p_s > 0.99) {
    result.tts_s = t_com_s;
    result.delta_tts_s = 0.0;
  } else {
    const double log_miss = std::log1p(-stats.p_s);  // ln(1 - p_s), p_s <= 0.99 < 1
    result.tts_s = t_com_s * std::log(0.01) / log_miss;
    result.delta_tts_s =
        result.tts_s * stats.delta_p_s / ((1.0 - stats.p_s) * std::abs(log_miss));
  }
  return result;
}

RunResult batch_best_of(const IsingInstance& instance, const SolverConfig& cfg,
                        const TuningResult& tuning, std::size_t n_batch,
                        std::uint64_t master_seed, unsigned workers, const CutGraph* graph) {
  if (n_batch < 1) throw std::invalid_argument("batch size must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<RunResult> results(n_batch, RunResult{.final_spins = SpinConfig::unchecked({})});
  ThreadPool pool(workers);
  pool.for_each_index(n_batch, [&](std::size_t r) {
    SolverConfig replica = cfg;
    replica.seed = derive_seed(master_seed, {seed_stream::batch, r});
    results[r] = run(instance, replica, tuning, graph, nullptr);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < n_batch; ++r) {
    if (results[r].energy < results[best].energy) best = r;
  }
  RunResult winner = std::move(results[best]);
  winner.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return winner;
}

CycleModel cycle_count(std::uint64_t n, std::uint64_t p_r, std::uint64_t p_c, std::uint64_t p_b,
                       std::uint64_t latency, std::optional<double> f_sys_hz) {
  if (n < 1 || p_r < 1 || p_c < 1 || p_b < 1) {
    throw std::invalid_argument("counts must be >= 1");
  }
  const std::uint64_t mac = p_r * p_c * p_b;
  if ((n * n) % mac != 0) {
    throw std::invalid_argument("N^2 = " + std::to_string(n * n) +
                                " is not divisible by P_r*P_c*P_b = " + std::to_string(mac));
  }
  if ((p_b * p_r) % p_c != 0) {
    throw std::invalid_argument("P_b*P_r = " + std::to_string(p_b * p_r) +
                                " is not divisible by P_c = " + std::to_string(p_c));
  }
  CycleModel model;
  model.n = n;
  model.p_r = p_r;
  model.p_c = p_c;
  model.p_b = p_b;
  model.latency = latency;
  model.n_cyc = (n * n) / mac + (p_b * p_r) / p_c + latency;
  if (f_sys_hz) {
    if (!(*f_sys_hz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
    model.f_sys_hz = f_sys_hz;
    model.step_time_s = static_cast<double>(model.n_cyc) / *f_sys_hz;
  }
  return model;
}

namespace {

struct CellStats {
  double mean = 0.0;
  double best = 0.0;
};

CellStats summarize(const std::vector<double>& energies) {
  CellStats s;
  s.best = energies.front();
  for (double e : energies) {
    s.mean += e;
    s.best = std::min(s.best, e);
  }
  s.mean /= static_cast<double>(energies.size());
  return s;
}

}  // namespace

SweepCell run_sweep_cell(const IsingInstance& instance, std::uint64_t m_steps, double a,
                         std::size_t mi, std::size_t ai, std::size_t reps,
                         const SolverConfig& cfg_base, const TuningResult& tuning, double target,
                         ThreadPool& pool) {
  if (reps < 1) throw std::invalid_argument("sweep cell needs reps >= 1");
  SweepCell cell;
  cell.mi = mi;
  cell.ai = ai;
  cell.m_steps = m_steps;
  cell.a = a;
  cell.energies.resize(reps);

  SolverConfig cfg = cfg_base;
  cfg.steps = m_steps;
  cfg.a = a;
  pool.for_each_index(reps, [&](std::size_t r) {
    SolverConfig replica = cfg;
    replica.seed = derive_seed(cfg_base.seed, {seed_stream::sweep, mi, ai, r});
    cell.energies[r] = run(instance, replica, tuning, nullptr, nullptr).energy;
  });

  cell.stats = success_probability(cell.energies, target);
  const CellStats s = summarize(cell.energies);
  cell.mean_energy = s.mean;
  cell.best_energy = s.best;
  return cell;
}

SweepGrid sweep(const IsingInstance& instance, std::vector<std::uint64_t> m_values,
                std::vector<double> a_values, std::size_t reps, const SolverConfig& cfg_base,
                const TuningResult& tuning, double target, unsigned workers,
                const SweepCellSink& sink, const SweepCellSkip& skip) {
  if (m_values.empty() || a_values.empty()) throw std::invalid_argument("empty sweep axes");
  if (reps < 1) throw std::invalid_argument("sweep needs reps >= 1");

  SweepGrid grid;
  grid.axis_m = std::move(m_values);
  grid.axis_a = std::move(a_values);
  grid.instance_label = instance.label();
  grid.config_base = cfg_base;
  grid.target = target;
  grid.reps = reps;

  ThreadPool pool(workers);
  for (std::size_t mi = 0; mi < grid.axis_m.size(); ++mi) {
    for (std::size_t ai = 0; ai < grid.axis_a.size(); ++ai) {
      if (skip && skip(mi, ai)) continue;
      SweepCell cell = run_sweep_cell(instance, grid.axis_m[mi], grid.axis_a[ai], mi, ai, reps,
                                      cfg_base, tuning, target, pool);
      if (sink) sink(cell);
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

void restat(SweepGrid& grid, double target) {
  grid.target = target;
  for (auto& cell : grid.cells) {
    if (!cell.energies.empty()) cell.stats = success_probability(cell.energies, target);
  }
}

DtSweepGrid dt_sweep(const IsingInstance& instance, std::vector<double> d_t_values,
                     std::vector<double> t_final_values, double a, std::size_t reps,
                     const SolverConfig& cfg_base, const TuningResult& tuning, double target,
                     unsigned workers, const DtSweepCellSink& sink) {
  if (d_t_values.empty() || t_final_values.empty()) {
    throw std::invalid_argument("empty sweep axes");
  }
  if (reps < 1) throw std::invalid_argument("sweep needs reps >= 1");
  for (double v : d_t_values) {
    if (!(v > 0.0)) throw std::invalid_argument("D_t values must be positive");
  }
  for (double v : t_final_values) {
    if (!(v > 0.0)) throw std::invalid_argument("t_M values must be positive");
  }

  DtSweepGrid grid;
  grid.axis_d_t = std::move(d_t_values);
  grid.axis_t_final = std::move(t_final_values);
  grid.instance_label = instance.label();
  grid.config_base = cfg_base;
  grid.target = target;
  grid.reps = reps;

  ThreadPool pool(workers);
  for (std::size_t di = 0; di < grid.axis_d_t.size(); ++di) {
    const double dt =
        tune_dt(tuning.source.lambda_min, tuning.source.lambda_max, grid.axis_d_t[di]);
    for (std::size_t ti = 0; ti < grid.axis_t_final.size(); ++ti) {
      const double t_final = grid.axis_t_final[ti];
      const auto m_steps = static_cast<std::uint64_t>(std::llround(t_final / dt));
      if (m_steps == 0) {
        throw std::invalid_argument("t_M = " + std::to_string(t_final) +
                                    " rounds to zero steps at dt = " + std::to_string(dt));
      }

      DtSweepCell cell;
      cell.di = di;
      cell.ti = ti;
      cell.d_t_factor = grid.axis_d_t[di];
      cell.t_final = t_final;
      cell.dt = dt;
      cell.m_steps = m_steps;
      cell.energies.resize(reps);

      SolverConfig cfg = cfg_base;
      cfg.steps = m_steps;
      cfg.dt = dt;
      cfg.a = a;
      pool.for_each_index(reps, [&](std::size_t r) {
        SolverConfig replica = cfg;
        replica.seed = derive_seed(cfg_base.seed, {seed_stream::dt_sweep, di, ti, r});
        cell.energies[r] = run(instance, replica, tuning, nullptr, nullptr).energy;
      });

      cell.stats = success_probability(cell.energies, target);
      const CellStats s = summarize(cell.energies);
      cell.mean_energy = s.mean;
      cell.best_energy = s.best;
      if (sink) sink(cell);
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

std::string sweep_csv_header() {
  return "m,a,reps,hits,p_s,delta_p_s,mean_energy,best_energy";
}

std::string sweep_csv_row(const SweepCell& cell) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%llu,%.10g,%zu,%zu,%.10g,%.10g,%.10g,%.10g",
                static_cast<unsigned long long>(cell.m_steps), cell.a, cell.stats.n_rep,
                cell.stats.hit_count, cell.stats.p_s, cell.stats.delta_p_s, cell.mean_energy,
                cell.best_energy);
  return buf;
}

std::string dt_sweep_csv_header() {
  return "d_t,t_final,dt,m,reps,hits,p_s,delta_p_s,mean_energy,best_energy";
}

std::string dt_sweep_csv_row(const DtSweepCell& cell) {
  char buf[288];
  std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%llu,%zu,%zu,%.10g,%.10g,%.10g,%.10g",
                cell.d_t_factor, cell.t_final, cell.dt,
                static_cast<unsigned long long>(cell.m_steps), cell.stats.n_rep,
                cell.stats.hit_count, cell.stats.p_s, cell.stats.delta_p_s, cell.mean_energy,
                cell.best_energy);
  return buf;
}

namespace {

nlohmann::json stats_json(const SuccessStats& stats) {
  return {{"p_s", stats.p_s},
          {"delta_p_s", stats.delta_p_s},
          {"n_rep", stats.n_rep},
          {"hits", stats.hit_count},
          {"target", stats.target_value}};
}

nlohmann::json base_config_json(const SolverConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  if (cfg.dt) j["dt"] = *cfg.dt; else j["dt"] = nullptr;
  if (cfg.c) j["c"] = *cfg.c; else j["c"] = nullptr;
  j["seed"] = cfg.seed;
  j["init_mode"] = to_string(cfg.init_mode);
  return j;
}

nlohmann::json environment_json(unsigned workers) {
  return {{"workers", workers}, {"arithmetic", "fp64"}, {"tool", "sbopt"}};
}

}  // namespace

std::string sweep_summary_json(const SweepGrid& grid, unsigned workers) {
  nlohmann::json doc;
  doc["instance"] = grid.instance_label;
  doc["axis_m"] = grid.axis_m;
  doc["axis_a"] = grid.axis_a;
  doc["reps"] = grid.reps;
  doc["target"] = grid.target;
  doc["config"] = base_config_json(grid.config_base);
  doc["environment"] = environment_json(workers);
  auto cells = nlohmann::json::array();
  for (const auto& cell : grid.cells) {
    nlohmann::json c;
    c["m"] = cell.m_steps;
    c["a"] = cell.a;
    c["stats"] = stats_json(cell.stats);
    c["mean_energy"] = cell.mean_energy;
    c["best_energy"] = cell.best_energy;
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2);
}

std::string dt_sweep_summary_json(const DtSweepGrid& grid, unsigned workers) {
  nlohmann::json doc;
  doc["instance"] = grid.instance_label;
  doc["axis_d_t"] = grid.axis_d_t;
  doc["axis_t_final"] = grid.axis_t_final;
  doc["reps"] = grid.reps;
  doc["target"] = grid.target;
  doc["config"] = base_config_json(grid.config_base);
  doc["environment"] = environment_json(workers);
  auto cells = nlohmann::json::array();
  for (const auto& cell : grid.cells) {
    nlohmann::json c;
    c["d_t"] = cell.d_t_factor;
    c["t_final"] = cell.t_final;
    c["dt"] = cell.dt;
    c["m"] = cell.m_steps;
    c["stats"] = stats_json(cell.stats);
    c["mean_energy"] = cell.mean_energy;
    c["best_energy"] = cell.best_energy;
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2);
}

}  // namespace sbopt
