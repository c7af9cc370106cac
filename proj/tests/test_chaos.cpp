#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sbopt/chaos.hpp"
#include "sbopt/model.hpp"
#include "sbopt/rng.hpp"
#include "sbopt/spectral.hpp"

using namespace sbopt;

namespace {

TuningResult wigner_tuning(const IsingInstance& inst) {
  return auto_tune(inst, TuneMode::wigner);
}

}  // namespace

TEST_CASE("paired initial conditions: delta(0) = 1e-6 and +-2e-6 offsets") {
  const auto [s1, s2] = paired_initial_conditions(500, 42);
  CHECK(std::abs(normalized_distance(s1.x, s2.x) - 1e-6) <= 1e-15);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(std::abs(s1.x[i]) == 0.1);
    CHECK(std::abs(s2.x[i] - s1.x[i]) == doctest::Approx(2e-6).epsilon(1e-9));
    CHECK(s1.y[i] == 0.0);
    CHECK(s2.y[i] == 0.0);
    CHECK(s1.p[i] == 1.0);
    CHECK(s2.p[i] == 1.0);
  }

  const auto [t1, t2] = paired_initial_conditions(500, 42);
  CHECK(t1.x == s1.x);
  CHECK(t2.x == s2.x);
  const auto [u1, u2] = paired_initial_conditions(500, 43);
  CHECK(u1.x != s1.x);
}

TEST_CASE("perturbation signs are drawn independently per index") {
  const auto [s1, s2] = paired_initial_conditions(2000, 7);
  std::size_t plus = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (s2.x[i] > s1.x[i]) ++plus;
  }
  CHECK(plus > 800);  // ~half within 4+ sigma
  CHECK(plus < 1200);
}

TEST_CASE("normalized distance basics") {
  const std::vector<double> a{0.5, -0.5, 0.25};
  CHECK(normalized_distance(a, a) == 0.0);

  const std::vector<double> plus(100, 1.0);
  const std::vector<double> minus(100, -1.0);
  CHECK(normalized_distance(plus, minus) == 1.0);

  const std::vector<double> b{0.5, -0.5};
  CHECK_THROWS_AS(normalized_distance(a, b), std::invalid_argument);
}

TEST_CASE("random +-1 vectors sit near 1/sqrt(2)") {
  Xoshiro256pp rng(123);
  std::vector<double> x1(10000), x2(10000);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    x1[i] = rng.random_sign();
    x2[i] = rng.random_sign();
  }
  CHECK(std::abs(normalized_distance(x1, x2) - 1.0 / std::sqrt(2.0)) <= 0.02);
}

TEST_CASE("normalized distance is a scaled metric") {
  Xoshiro256pp rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(32), b(32), c(32);
    for (std::size_t i = 0; i < 32; ++i) {
      a[i] = rng.uniform_symmetric();
      b[i] = rng.uniform_symmetric();
      c[i] = rng.uniform_symmetric();
    }
    CHECK(normalized_distance(a, b) == normalized_distance(b, a));
    CHECK(normalized_distance(a, b) <=
          normalized_distance(a, c) + normalized_distance(c, b) + 1e-12);
    CHECK(normalized_distance(a, b) >= 0.0);
  }
}

TEST_CASE("divergence run structure") {
  const auto inst = gen_random_dense(48, 31);
  const auto tuning = wigner_tuning(inst);
  SolverConfig cfg;
  cfg.variant = Variant::gbsb;
  cfg.steps = 230;
  cfg.a = 0.3;
  cfg.sample_stride = 50;

  const auto record = divergence_run(inst, cfg, tuning, 91);
  CHECK(record.a == 0.3);
  CHECK(record.seed == 91);
  REQUIRE(!record.deltas.empty());
  CHECK(record.deltas.front().first == 0);
  CHECK(std::abs(record.deltas.front().second - 1e-6) <= 1e-15);
  CHECK(record.deltas.back().first == 230);
  CHECK(record.final_delta == record.deltas.back().second);
  for (const auto& [m, d] : record.deltas) {
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
  // Stride samples: 0, 50, 100, 150, 200, 230.
  CHECK(record.deltas.size() == 6);

  const auto again = divergence_run(inst, cfg, tuning, 91);
  CHECK(again.deltas == record.deltas);

  SolverConfig bad = cfg;
  bad.variant = Variant::dsb;
  CHECK_THROWS_AS(divergence_run(inst, bad, tuning, 91), std::invalid_argument);
}

TEST_CASE("divergence run defaults the sampling stride to 100") {
  const auto inst = gen_random_dense(32, 3);
  const auto tuning = wigner_tuning(inst);
  SolverConfig cfg;
  cfg.variant = Variant::gbsb;
  cfg.steps = 250;
  cfg.a = 0.0;
  const auto record = divergence_run(inst, cfg, tuning, 5);
  REQUIRE(record.deltas.size() == 4);  // m = 0, 100, 200, 250
  CHECK(record.deltas[1].first == 100);
}

TEST_CASE("chaos scan rows follow the requested A values deterministically") {
  const auto inst = gen_random_dense(40, 77);
  const auto tuning = wigner_tuning(inst);
  SolverConfig base;
  base.variant = Variant::gbsb;
  base.steps = 150;
  base.seed = 1234;

  const std::vector<double> a_values{0.0, 0.4, 0.8};
  const auto rows = chaos_scan(inst, a_values, 5, base, tuning, 2);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].a == a_values[i]);
    CHECK(rows[i].reps == 5);
    CHECK(rows[i].seed == 1234);
    CHECK(rows[i].final_deltas.size() == 5);
    CHECK(rows[i].mean_final_delta >= 0.0);
    CHECK(rows[i].mean_final_delta <= 1.0);
    CHECK(rows[i].std_error >= 0.0);
  }

  const auto again = chaos_scan(inst, a_values, 5, base, tuning, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].final_deltas == again[i].final_deltas);  // worker-count independent
  }

  const auto single = chaos_scan(inst, a_values, 1, base, tuning, 1);
  CHECK(single[0].std_error == 0.0);
}

TEST_CASE("regular at A=0, scrambled at large A") {
  // Physical smoke check at small scale; the full-size limits live in the
  // acceptance suite.
  const auto inst = gen_random_dense(96, 2001);
  const auto tuning = wigner_tuning(inst);
  SolverConfig base;
  base.variant = Variant::gbsb;
  base.steps = 800;
  base.seed = 55;

  const std::vector<double> a_values{0.0, 1.2};
  const auto rows = chaos_scan(inst, a_values, 12, base, tuning, 2);
  CHECK(rows[0].mean_final_delta < 0.1);
  CHECK(rows[1].mean_final_delta > 0.4);
}

TEST_CASE("chaos CSV schema") {
  CHECK(chaos_csv_header() == std::string("a,mean_final_delta,stderr,reps,seed"));
  ChaosScanRow row;
  row.a = 0.25;
  row.mean_final_delta = 0.5;
  row.std_error = 0.01;
  row.reps = 100;
  row.seed = 7;
  CHECK(chaos_csv_row(row) == std::string("0.25,0.5,0.01,100,7"));
}
