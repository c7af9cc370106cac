// Command-line front end: solve / bench / sweep / chaos / cycles / gen.
// Every output embeds the seed and the resolved configuration, so any row or
// manifest can be reproduced exactly by re-running with the echoed values.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or input-format error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sbopt/bench.hpp"
#include "sbopt/chaos.hpp"
#include "sbopt/engine.hpp"
#include "sbopt/errors.hpp"
#include "sbopt/model.hpp"
#include "sbopt/rng.hpp"
#include "sbopt/spectral.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Usage-class failure: bad arguments, missing or malformed input files.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceOptions {
  std::string path;        // positional; JSON or G-set, sniffed
  std::string gset_path;   // explicit G-set file
  std::string json_path;   // explicit JSON instance file
  std::uint64_t dense_n = 0;  // generate a random dense instance
  std::uint64_t dense_seed = 1;
};

struct SolverOptions {
  std::string variant = "gbsb";
  double a = 0.2;
  std::uint64_t m_steps = 1000;
  double d_t_factor = 1.25;
  std::optional<double> dt;
  std::optional<double> c;
  std::string tune = "numerical";
  std::uint64_t seed = 0;
  std::uint64_t sample_stride = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct Problem {
  sbopt::IsingInstance instance;
  std::optional<sbopt::CutGraph> graph;  // present when loaded from a graph
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opts) {
  cmd->add_option("instance", opts.path, "instance file (G-set text or JSON, sniffed)");
  cmd->add_option("--gset", opts.gset_path, "G-set graph file");
  cmd->add_option("--json", opts.json_path, "JSON instance file");
  cmd->add_option("--dense", opts.dense_n, "generate a random dense +-1 instance of this size");
  cmd->add_option("--dense-seed", opts.dense_seed, "seed for --dense [1]");
}

void add_solver_options(CLI::App* cmd, SolverOptions& opts) {
  cmd->add_option("--variant", opts.variant, "bsb | dsb | gbsb [gbsb]")
      ->check(CLI::IsMember({"bsb", "dsb", "gbsb"}));
  cmd->add_option("--A", opts.a, "nonlinear-control strength A [0.2]");
  cmd->add_option("--M", opts.m_steps, "number of time-evolution steps M [1000]");
  cmd->add_option("--Dt", opts.d_t_factor, "time-step factor D_t [1.25]");
  cmd->add_option("--dt", opts.dt, "explicit time step (skips dt tuning)");
  cmd->add_option("--c", opts.c, "explicit coupling scale (skips c tuning)");
  cmd->add_option("--tune", opts.tune, "wigner | numerical [numerical]")
      ->check(CLI::IsMember({"wigner", "numerical"}));
  cmd->add_option("--seed", opts.seed, "master seed [0]");
  cmd->add_option("--sample-stride", opts.sample_stride,
                  "record the trajectory every this many steps (0 = final only)");
  cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
}

std::string read_file(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw UsageError("no such file: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

Problem load_problem(const InstanceOptions& opts) {
  const int sources = int(!opts.path.empty()) + int(!opts.gset_path.empty()) +
                      int(!opts.json_path.empty()) + int(opts.dense_n > 0);
  if (sources == 0) {
    throw UsageError("no instance given (positional path, --gset, --json or --dense)");
  }
  if (sources > 1) throw UsageError("give exactly one instance source");

  if (opts.dense_n > 0) {
    return {sbopt::gen_random_dense(opts.dense_n, opts.dense_seed), std::nullopt};
  }
  if (!opts.json_path.empty()) {
    return {sbopt::instance_from_json(read_file(opts.json_path)), std::nullopt};
  }
  if (!opts.gset_path.empty()) {
    sbopt::CutGraph graph = sbopt::parse_gset(read_file(opts.gset_path));
    auto instance = sbopt::maxcut_to_ising(graph);
    return {std::move(instance), std::move(graph)};
  }
  const std::string text = read_file(opts.path);
  if (looks_like_json(text)) {
    return {sbopt::instance_from_json(text), std::nullopt};
  }
  sbopt::CutGraph graph = sbopt::parse_gset(text);
  auto instance = sbopt::maxcut_to_ising(graph);
  return {std::move(instance), std::move(graph)};
}

sbopt::Variant parse_variant(const std::string& name) {
  if (name == "bsb") return sbopt::Variant::bsb;
  if (name == "dsb") return sbopt::Variant::dsb;
  return sbopt::Variant::gbsb;
}

sbopt::SolverConfig make_config(const SolverOptions& opts) {
  sbopt::SolverConfig cfg;
  cfg.variant = parse_variant(opts.variant);
  cfg.steps = opts.m_steps;
  cfg.a = opts.a;
  cfg.dt = opts.dt;
  cfg.c = opts.c;
  cfg.seed = opts.seed;
  cfg.sample_stride = opts.sample_stride;
  return cfg;
}

sbopt::TuningResult make_tuning(const sbopt::IsingInstance& instance,
                                const SolverOptions& opts) {
  if (opts.dt && opts.c) {
    // Fully overridden; nothing to estimate.
    sbopt::TuningResult t;
    t.c = *opts.c;
    t.dt = *opts.dt;
    t.d_t_factor = 0.0;
    t.source.method = sbopt::SpectralMethod::wigner;
    t.source.lambda_max = std::numeric_limits<double>::quiet_NaN();
    t.source.lambda_min = std::numeric_limits<double>::quiet_NaN();
    return t;
  }
  const auto mode =
      opts.tune == "wigner" ? sbopt::TuneMode::wigner : sbopt::TuneMode::numerical;
  return sbopt::auto_tune(instance, mode, opts.d_t_factor);
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text << '\n';
}

// Grid specs: "lo:hi:step" (inclusive, within half a step) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream iss(spec);
    if (!(iss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0)) {
      throw UsageError("bad grid spec '" + spec + "' (want lo:hi:step)");
    }
    for (double v = lo; v <= hi + step * 0.5; v += step) {
      values.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    }
  } else {
    std::istringstream iss(spec);
    std::string tok;
    while (std::getline(iss, tok, ',')) {
      if (tok.empty()) continue;
      values.push_back(std::stod(tok));
    }
  }
  if (values.empty()) throw UsageError("empty grid spec '" + spec + "'");
  return values;
}

std::vector<std::uint64_t> parse_int_grid(const std::string& spec) {
  std::vector<std::uint64_t> values;
  for (double v : parse_grid(spec)) {
    const auto i = static_cast<std::uint64_t>(std::llround(v));
    if (i < 1) throw UsageError("grid values must be >= 1 in '" + spec + "'");
    values.push_back(i);
  }
  return values;
}

double resolve_energy_target(const Problem& problem, std::optional<double> target_energy,
                             std::optional<double> target_cut) {
  if (target_energy && target_cut) throw UsageError("give one of --target-energy/--target-cut");
  if (target_energy) return *target_energy;
  if (!target_cut) throw UsageError("a target is required (--target-energy or --target-cut)");
  if (!problem.graph) throw UsageError("--target-cut needs a graph instance (G-set)");
  // cut >= C  <=>  E <= W - 2C
  return static_cast<double>(problem.graph->total_weight()) - 2.0 * *target_cut;
}

// ---------------------------------------------------------------------------

int cmd_solve(const InstanceOptions& inst_opts, const SolverOptions& sol_opts,
              std::uint64_t batch, const std::string& out_path, bool rle_spins) {
  const Problem problem = load_problem(inst_opts);
  const sbopt::TuningResult tuning = make_tuning(problem.instance, sol_opts);
  const sbopt::SolverConfig cfg = make_config(sol_opts);
  const sbopt::CutGraph* graph = problem.graph ? &*problem.graph : nullptr;

  sbopt::RunResult result = [&] {
    if (batch > 1) {
      return sbopt::batch_best_of(problem.instance, cfg, tuning, batch, sol_opts.seed,
                                  sol_opts.workers, graph);
    }
    sbopt::ThreadPool pool(sol_opts.workers);
    return sbopt::run(problem.instance, cfg, tuning, graph, &pool);
  }();

  write_output(out_path, sbopt::run_manifest_json(result, problem.instance.label(), rle_spins));
  return 0;
}

int cmd_bench(const InstanceOptions& inst_opts, const SolverOptions& sol_opts,
              std::size_t reps, std::uint64_t batch, std::optional<double> target_energy,
              std::optional<double> target_cut, const std::string& out_path) {
  const Problem problem = load_problem(inst_opts);
  const double energy_target = resolve_energy_target(problem, target_energy, target_cut);
  const sbopt::TuningResult tuning = make_tuning(problem.instance, sol_opts);
  const sbopt::SolverConfig cfg = make_config(sol_opts);

  std::vector<double> energies(reps);
  std::vector<double> times(reps);
  if (batch > 1) {
    for (std::size_t r = 0; r < reps; ++r) {
      const std::uint64_t rep_seed =
          sbopt::derive_seed(sol_opts.seed, {sbopt::seed_stream::bench, r});
      auto result = sbopt::batch_best_of(problem.instance, cfg, tuning, batch, rep_seed,
                                         sol_opts.workers, nullptr);
      energies[r] = result.energy;
      times[r] = result.wall_time_s;
    }
  } else {
    sbopt::ThreadPool pool(sol_opts.workers);
    pool.for_each_index(reps, [&](std::size_t r) {
      sbopt::SolverConfig replica = cfg;
      replica.seed = sbopt::derive_seed(sol_opts.seed, {sbopt::seed_stream::bench, r});
      auto result = sbopt::run(problem.instance, replica, tuning, nullptr, nullptr);
      energies[r] = result.energy;
      times[r] = result.wall_time_s;
    });
  }

  const auto stats = sbopt::success_probability(energies, energy_target);
  double t_com = 0.0;
  for (double t : times) t_com += t;
  t_com /= static_cast<double>(reps);

  nlohmann::json doc;
  doc["tool"] = "sbopt";
  doc["instance"] = problem.instance.label();
  doc["reps"] = reps;
  doc["batch"] = batch;
  doc["seed"] = sol_opts.seed;
  doc["target_energy"] = energy_target;
  doc["p_s"] = stats.p_s;
  doc["delta_p_s"] = stats.delta_p_s;
  doc["hits"] = stats.hit_count;
  doc["t_com_s"] = t_com;
  double best = energies[0], mean = 0.0;
  for (double e : energies) {
    best = std::min(best, e);
    mean += e;
  }
  doc["best_energy"] = best;
  doc["mean_energy"] = mean / static_cast<double>(reps);
  if (stats.p_s > 0.0) {
    const auto tts = sbopt::time_to_solution(t_com, stats);
    doc["tts_s"] = tts.tts_s;
    doc["delta_tts_s"] = tts.delta_tts_s;
  } else {
    doc["tts_s"] = nullptr;
    doc["delta_tts_s"] = nullptr;
  }
  doc["config"] = {{"variant", sol_opts.variant}, {"M", sol_opts.m_steps}, {"A", sol_opts.a},
                   {"dt", tuning.dt},             {"c", tuning.c},         {"D_t", tuning.d_t_factor}};
  write_output(out_path, doc.dump(2));
  return 0;
}

struct SweepArgs {
  std::string m_grid;
  std::string a_grid;
  std::string dt_grid;
  std::string tm_grid;
  std::size_t reps = 100;
  std::optional<double> target_energy;
  std::optional<double> target_cut;
  std::string out_path;
  std::string summary_path;
  bool resume = false;
};

// Previously written rows, keyed by the first two CSV columns.
std::vector<std::pair<double, double>> read_done_keys(const std::string& path,
                                                      const std::string& expected_header) {
  std::vector<std::pair<double, double>> keys;
  std::ifstream in(path);
  if (!in) return keys;
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw UsageError("existing output " + path + " does not match the expected CSV schema");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string first, second;
    if (std::getline(iss, first, ',') && std::getline(iss, second, ',')) {
      keys.emplace_back(std::stod(first), std::stod(second));
    }
  }
  return keys;
}

int cmd_sweep(const InstanceOptions& inst_opts, const SolverOptions& sol_opts,
              const SweepArgs& args) {
  const bool dt_mode = !args.dt_grid.empty() || !args.tm_grid.empty();
  if (dt_mode && (args.dt_grid.empty() || args.tm_grid.empty())) {
    throw UsageError("dt-sweep mode needs both --Dt-grid and --tM-grid");
  }
  if (!dt_mode && (args.m_grid.empty() || args.a_grid.empty())) {
    throw UsageError("sweep needs --M-grid and --A-grid (or --Dt-grid/--tM-grid)");
  }
  if (args.out_path.empty()) throw UsageError("sweep needs --out CSV path");

  const Problem problem = load_problem(inst_opts);
  const double target = resolve_energy_target(problem, args.target_energy, args.target_cut);
  const sbopt::TuningResult tuning = make_tuning(problem.instance, sol_opts);
  const sbopt::SolverConfig base = make_config(sol_opts);
  const unsigned workers = sbopt::effective_workers(sol_opts.workers);

  const std::string header =
      dt_mode ? sbopt::dt_sweep_csv_header() : sbopt::sweep_csv_header();
  std::vector<std::pair<double, double>> done;
  if (args.resume && std::filesystem::exists(args.out_path)) {
    done = read_done_keys(args.out_path, header);
  }
  const auto is_done = [&](double k1, double k2) {
    return std::any_of(done.begin(), done.end(), [&](const auto& kv) {
      return std::abs(kv.first - k1) < 1e-9 && std::abs(kv.second - k2) < 1e-9;
    });
  };

  std::ofstream out;
  const bool fresh = !args.resume || !std::filesystem::exists(args.out_path);
  out.open(args.out_path, fresh ? std::ios::trunc : std::ios::app);
  if (!out) throw UsageError("cannot write " + args.out_path);
  if (fresh) out << header << '\n';

  std::string summary;
  if (dt_mode) {
    auto grid = sbopt::dt_sweep(
        problem.instance, parse_grid(args.dt_grid), parse_grid(args.tm_grid), sol_opts.a,
        args.reps, base, tuning, target, workers, [&](const sbopt::DtSweepCell& cell) {
          if (is_done(cell.d_t_factor, cell.t_final)) return;
          out << sbopt::dt_sweep_csv_row(cell) << '\n';
          out.flush();
          std::cerr << "sweep: D_t=" << cell.d_t_factor << " t_M=" << cell.t_final
                    << " p_s=" << cell.stats.p_s << '\n';
        });
    summary = sbopt::dt_sweep_summary_json(grid, workers);
  } else {
    auto grid = sbopt::sweep(
        problem.instance, parse_int_grid(args.m_grid), parse_grid(args.a_grid), args.reps, base,
        tuning, target, workers,
        [&](const sbopt::SweepCell& cell) {
          out << sbopt::sweep_csv_row(cell) << '\n';
          out.flush();
          std::cerr << "sweep: M=" << cell.m_steps << " A=" << cell.a
                    << " p_s=" << cell.stats.p_s << '\n';
        },
        [&](std::size_t mi, std::size_t ai) {
          return is_done(static_cast<double>(parse_int_grid(args.m_grid)[mi]),
                         parse_grid(args.a_grid)[ai]);
        });
    summary = sbopt::sweep_summary_json(grid, workers);
  }

  const std::string summary_path =
      args.summary_path.empty() ? args.out_path + ".json" : args.summary_path;
  write_output(summary_path, summary);
  return 0;
}

int cmd_chaos(const InstanceOptions& inst_opts, const SolverOptions& sol_opts,
              const std::string& a_grid, std::size_t reps, const std::string& out_path) {
  const Problem problem = load_problem(inst_opts);
  const sbopt::TuningResult tuning = make_tuning(problem.instance, sol_opts);
  sbopt::SolverConfig base = make_config(sol_opts);
  base.variant = sbopt::Variant::gbsb;

  const auto a_values = parse_grid(a_grid);
  const auto rows = sbopt::chaos_scan(problem.instance, a_values, reps, base, tuning,
                                      sbopt::effective_workers(sol_opts.workers));
  std::ostringstream csv;
  csv << sbopt::chaos_csv_header() << '\n';
  for (const auto& row : rows) csv << sbopt::chaos_csv_row(row) << '\n';
  std::string text = csv.str();
  text.pop_back();
  write_output(out_path, text);
  return 0;
}

int cmd_cycles(std::uint64_t n, std::uint64_t pr, std::uint64_t pc, std::uint64_t pb,
               std::uint64_t latency, std::optional<double> fsys) {
  const auto model = sbopt::cycle_count(n, pr, pc, pb, latency, fsys);
  std::cout << model.n_cyc << '\n';
  if (model.step_time_s) {
    std::cout << "step_time_us " << (*model.step_time_s * 1e6) << '\n';
  }
  return 0;
}

int cmd_gen(std::uint64_t n, std::uint64_t seed, const std::string& label,
            const std::string& out_path) {
  const auto instance =
      label.empty() ? sbopt::gen_random_dense(n, seed) : sbopt::gen_random_dense(n, seed, label);
  write_output(out_path, sbopt::instance_to_json(instance));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulated-bifurcation Ising/MAX-CUT solver and benchmark harness"};
  app.set_version_flag("--version", std::string("sbopt ") + kVersion);
  app.require_subcommand(1);

  InstanceOptions inst_opts;
  SolverOptions sol_opts;
  std::string out_path;
  std::uint64_t batch = 1;
  bool rle_spins = false;

  auto* solve = app.add_subcommand("solve", "run the solver once (or batch best-of)");
  add_instance_options(solve, inst_opts);
  add_solver_options(solve, sol_opts);
  solve->add_option("--batch", batch, "replicas per solve, best energy wins [1]");
  solve->add_flag("--rle-spins", rle_spins, "run-length encode spins in the manifest");
  solve->add_option("--out", out_path, "output path (default stdout)");

  std::size_t bench_reps = 100;
  std::optional<double> target_energy, target_cut;
  auto* bench = app.add_subcommand("bench", "success probability and time-to-solution");
  add_instance_options(bench, inst_opts);
  add_solver_options(bench, sol_opts);
  bench->add_option("--reps", bench_reps, "repetitions for estimating P_S [100]");
  bench->add_option("--batch", batch, "batch size per repetition [1]");
  bench->add_option("--target-energy", target_energy, "hit when energy <= this");
  bench->add_option("--target-cut", target_cut, "hit when cut >= this (graph instances)");
  bench->add_option("--out", out_path, "output path (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "(M, A) or (D_t, t_M) success-probability grid");
  add_instance_options(sweep, inst_opts);
  add_solver_options(sweep, sol_opts);
  sweep->add_option("--M-grid", sweep_args.m_grid, "M values, 'lo:hi:step' or comma list");
  sweep->add_option("--A-grid", sweep_args.a_grid, "A values, 'lo:hi:step' or comma list");
  sweep->add_option("--Dt-grid", sweep_args.dt_grid, "D_t values (dt-sweep mode)");
  sweep->add_option("--tM-grid", sweep_args.tm_grid, "t_M values (dt-sweep mode)");
  sweep->add_option("--reps", sweep_args.reps, "repetitions per cell [100]");
  sweep->add_option("--target-energy", sweep_args.target_energy, "hit when energy <= this");
  sweep->add_option("--target-cut", sweep_args.target_cut, "hit when cut >= this");
  sweep->add_option("--out", sweep_args.out_path, "CSV output path (append-only stream)");
  sweep->add_option("--summary", sweep_args.summary_path, "JSON summary path [<out>.json]");
  sweep->add_flag("--resume", sweep_args.resume, "skip cells already present in --out");

  std::string chaos_a_grid = "0:1:0.05";
  std::size_t chaos_reps = 100;
  auto* chaos = app.add_subcommand("chaos", "paired-trajectory divergence scan over A");
  add_instance_options(chaos, inst_opts);
  add_solver_options(chaos, sol_opts);
  chaos->add_option("--A-grid", chaos_a_grid, "A values, 'lo:hi:step' or comma list [0:1:0.05]");
  chaos->add_option("--reps", chaos_reps, "paired runs per A value [100]");
  chaos->add_option("--out", out_path, "CSV output path (default stdout)");

  std::uint64_t cyc_n = 0, cyc_pr = 1, cyc_pc = 1, cyc_pb = 1, cyc_latency = 0;
  std::optional<double> cyc_fsys;
  auto* cycles = app.add_subcommand("cycles", "clock cycles per time-evolution step");
  cycles->add_option("--n", cyc_n, "oscillator count N")->required();
  cycles->add_option("--pr", cyc_pr, "row parallelism P_r")->required();
  cycles->add_option("--pc", cyc_pc, "column parallelism P_c")->required();
  cycles->add_option("--pb", cyc_pb, "block parallelism P_b")->required();
  cycles->add_option("--latency", cyc_latency, "circulative-path latency (cycles)")->required();
  cycles->add_option("--fsys", cyc_fsys, "system clock (Hz); also prints the step time");

  std::uint64_t gen_n = 0, gen_seed = 1;
  std::string gen_label;
  auto* gen = app.add_subcommand("gen", "generate a random dense +-1 instance (JSON)");
  gen->add_option("--n", gen_n, "spin count")->required();
  gen->add_option("--seed", gen_seed, "generator seed [1]");
  gen->add_option("--label", gen_label, "instance label");
  gen->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(inst_opts, sol_opts, batch, out_path, rle_spins);
    if (bench->parsed()) {
      return cmd_bench(inst_opts, sol_opts, bench_reps, batch, target_energy, target_cut,
                       out_path);
    }
    if (sweep->parsed()) return cmd_sweep(inst_opts, sol_opts, sweep_args);
    if (chaos->parsed()) return cmd_chaos(inst_opts, sol_opts, chaos_a_grid, chaos_reps, out_path);
    if (cycles->parsed()) return cmd_cycles(cyc_n, cyc_pr, cyc_pc, cyc_pb, cyc_latency, cyc_fsys);
    if (gen->parsed()) return cmd_gen(gen_n, gen_seed, gen_label, out_path);
  } catch (const UsageError& e) {
    std::cerr << "sbopt: " << e.what() << '\n';
    return 2;
  } catch (const sbopt::ParseError& e) {
    std::cerr << "sbopt: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sbopt: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sbopt: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
