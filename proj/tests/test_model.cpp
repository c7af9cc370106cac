#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "sbopt/errors.hpp"
#include "sbopt/model.hpp"
#include "sbopt/rng.hpp"

using namespace sbopt;

namespace {

// Test-only oracle: literal double sum over all (i, j), kept independent of
// the library's row-wise evaluation.
double energy_oracle(const IsingInstance& inst, const SpinConfig& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    for (std::size_t j = 0; j < inst.n(); ++j) {
      total += inst.coupling(i, j) * static_cast<double>(s[i]) * static_cast<double>(s[j]);
    }
  }
  return -0.5 * total;
}

SpinConfig spins_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<std::int8_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
  return SpinConfig::unchecked(std::move(s));
}

SpinConfig random_spins(std::size_t n, std::mt19937& gen) {
  std::vector<std::int8_t> s(n);
  for (auto& v : s) v = (gen() & 1) ? 1 : -1;
  return SpinConfig::unchecked(std::move(s));
}

IsingInstance two_spin(double j01) {
  return IsingInstance(2, {0.0, j01, j01, 0.0});
}

CutGraph triangle() {
  return CutGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
}

}  // namespace

TEST_CASE("instance construction enforces the matrix invariants") {
  CHECK_THROWS_AS(IsingInstance(2, {0.0, 1.0, 2.0, 0.0}), std::invalid_argument);  // asym
  CHECK_THROWS_AS(IsingInstance(2, {1.0, 0.0, 0.0, 0.0}), std::invalid_argument);  // diag
  CHECK_THROWS_AS(IsingInstance(2, {0.0, 1.0, 1.0}), std::invalid_argument);       // shape
  CHECK_THROWS_AS(IsingInstance(0, {}), std::invalid_argument);
  CHECK_NOTHROW(IsingInstance(1, {0.0}));
}

TEST_CASE("spin configs must be +-1") {
  CHECK_THROWS_AS(SpinConfig({1, 0, -1}), std::invalid_argument);
  CHECK_NOTHROW(SpinConfig({1, -1, 1}));
}

TEST_CASE("ising energy of zero couplings is zero") {
  IsingInstance inst(4, std::vector<double>(16, 0.0));
  std::mt19937 gen(1);
  for (int t = 0; t < 8; ++t) {
    CHECK(ising_energy(inst, random_spins(4, gen)) == 0.0);
  }
}

TEST_CASE("two-spin energies by hand") {
  const auto inst = two_spin(1.0);
  CHECK(ising_energy(inst, SpinConfig({1, 1})) == -1.0);
  CHECK(ising_energy(inst, SpinConfig({1, -1})) == 1.0);
}

TEST_CASE("energy matches the independent double-sum oracle") {
  const auto inst = gen_random_dense(8, 42);
  std::mt19937 gen(7);
  for (int t = 0; t < 32; ++t) {
    const auto s = random_spins(8, gen);
    CHECK(ising_energy(inst, s) == energy_oracle(inst, s));
  }
}

TEST_CASE("energy is invariant under a global spin flip") {
  std::mt19937 gen(3);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = gen_random_dense(12, seed);
    const auto s = random_spins(12, gen);
    CHECK(ising_energy(inst, s) == ising_energy(inst, s.negated()));
  }
}

TEST_CASE("energy rejects mismatched sizes") {
  const auto inst = two_spin(1.0);
  CHECK_THROWS_AS(ising_energy(inst, SpinConfig({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("triangle cut values") {
  const auto g = triangle();
  CHECK(cut_value(g, SpinConfig({1, 1, -1})) == 2);
  CHECK(cut_value(g, SpinConfig({1, 1, 1})) == 0);
  CHECK(cut_value(g, SpinConfig({-1, -1, -1})) == 0);

  long long best = 0;
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    best = std::max(best, cut_value(g, spins_from_mask(3, mask)));
  }
  CHECK(best == 2);
}

TEST_CASE("cut at the enumerated argmax equals the exhaustive maximum") {
  std::mt19937 gen(11);
  std::uniform_int_distribution<int> weight(-3, 3);
  std::vector<CutEdge> edges;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) {
      if (gen() % 3 == 0) continue;
      int w = weight(gen);
      if (w == 0) w = 1;
      edges.push_back({i, j, w});
    }
  }
  const CutGraph g(10, edges);

  long long best = std::numeric_limits<long long>::min();
  std::uint64_t best_mask = 0;
  for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
    const long long c = cut_value(g, spins_from_mask(10, mask));
    if (c > best) {
      best = c;
      best_mask = mask;
    }
  }
  CHECK(cut_value(g, spins_from_mask(10, best_mask)) == best);

  // Max cut corresponds to the Ising minimum through the bridge.
  const auto inst = maxcut_to_ising(g);
  const auto [ground, energy] = brute_force_ground_state(inst);
  CHECK(cut_value(g, ground) == best);
  CHECK(2 * best + static_cast<long long>(energy) == g.total_weight());
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(CutGraph(3, {{0, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CutGraph(3, {{0, 3, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CutGraph(3, {{0, 1, 1}, {1, 0, 2}}), std::invalid_argument);
}

TEST_CASE("maxcut_to_ising writes -w couplings") {
  const CutGraph g(3, {{1, 2, 1}});
  const auto inst = maxcut_to_ising(g);
  CHECK(inst.coupling(1, 2) == -1.0);
  CHECK(inst.coupling(2, 1) == -1.0);
  CHECK(inst.coupling(0, 1) == 0.0);

  const auto zero = maxcut_to_ising(CutGraph(3, {}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(zero.coupling(i, j) == 0.0);
  }
}

TEST_CASE("cut/energy bridge identity on the triangle, all configurations") {
  const auto g = triangle();
  const auto inst = maxcut_to_ising(g);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const auto s = spins_from_mask(3, mask);
    CHECK(2.0 * static_cast<double>(cut_value(g, s)) + ising_energy(inst, s) ==
          static_cast<double>(g.total_weight()));
  }
}

TEST_CASE("cut/energy bridge identity on random graphs") {
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> weight(-4, 4);
  for (int t = 0; t < 10; ++t) {
    std::vector<CutEdge> edges;
    const std::size_t n = 5 + t;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (gen() % 2 == 0) edges.push_back({i, j, weight(gen)});
      }
    }
    const CutGraph g(n, edges);
    const auto inst = maxcut_to_ising(g);
    for (int k = 0; k < 10; ++k) {
      const auto s = random_spins(n, gen);
      CHECK(2.0 * static_cast<double>(cut_value(g, s)) + ising_energy(inst, s) ==
            doctest::Approx(static_cast<double>(g.total_weight())).epsilon(1e-12));
    }
  }
}

TEST_CASE("random dense generation is deterministic and +-1 valued") {
  const auto a = gen_random_dense(700, 123);
  const auto b = gen_random_dense(700, 123);
  CHECK(a.couplings().size() == b.couplings().size());
  bool equal = true;
  for (std::size_t k = 0; k < a.couplings().size(); ++k) {
    equal = equal && a.couplings()[k] == b.couplings()[k];
  }
  CHECK(equal);

  bool valued = true;
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      const double v = a.coupling(i, j);
      valued = valued && (i == j ? v == 0.0 : (v == 1.0 || v == -1.0));
    }
  }
  CHECK(valued);

  const auto c = gen_random_dense(700, 124);
  bool differs = false;
  for (std::size_t k = 0; k < a.couplings().size(); ++k) {
    differs = differs || a.couplings()[k] != c.couplings()[k];
  }
  CHECK(differs);
}

TEST_CASE("random dense off-diagonal mean is near zero") {
  const auto inst = gen_random_dense(1000, 2024);
  double sum = 0.0;
  const auto n = inst.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += inst.coupling(i, j);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double mean = sum / pairs;
  const double stderr_mean = 1.0 / std::sqrt(pairs);
  CHECK(std::abs(mean) <= 4.0 * stderr_mean);
}

TEST_CASE("random dense rejects n < 2") {
  CHECK_THROWS_AS(gen_random_dense(1, 0), std::invalid_argument);
}

TEST_CASE("gset parsing: fixture, defaults and errors") {
  const auto g = parse_gset("3 2\n1 2 1\n2 3 -1\n");
  CHECK(g.n() == 3);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0] == CutEdge{0, 1, 1});
  CHECK(g.edges()[1] == CutEdge{1, 2, -1});

  // Missing weight column defaults to 1.
  const auto g2 = parse_gset("2 1\n1 2\n");
  CHECK(g2.edges()[0] == CutEdge{0, 1, 1});

  CHECK_THROWS_WITH_AS(parse_gset("2 1\n1 3 1\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(parse_gset("2 1\n1 1 1\n"), doctest::Contains("self-loop"), ParseError);
  CHECK_THROWS_WITH_AS(parse_gset("3 2\n1 2 1\n2 1 1\n"), doctest::Contains("duplicate"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_gset("3 1\n1 x 1\n"), doctest::Contains("integer"), ParseError);
  CHECK_THROWS_AS(parse_gset("3 2\n1 2 1\n"), ParseError);            // truncated
  CHECK_THROWS_AS(parse_gset("3 1\n1 2 1\n2 3 1\n"), ParseError);     // trailing
  CHECK_THROWS_AS(parse_gset(""), ParseError);                        // no header
  CHECK_THROWS_AS(parse_gset("3\n"), ParseError);                     // bad header
}

TEST_CASE("gset tokens may be separated by arbitrary whitespace") {
  const auto g = parse_gset("  3   2 \n\n  1\t2   1\n 2  3\t-1 \n");
  CHECK(g.n() == 3);
  CHECK(g.edges().size() == 2);
}

TEST_CASE("gset serialize/parse round trip") {
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> weight(-9, 9);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + gen() % 20;
    std::vector<CutEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (gen() % 2 == 0) {
          int w = weight(gen);
          edges.push_back({i, j, w});
        }
      }
    }
    const CutGraph g(n, edges);
    CHECK(parse_gset(serialize_gset(g)) == g);
  }
}

TEST_CASE("signs from positions") {
  const std::vector<double> xs{0.3, -0.7};
  const auto s = signs_from_positions(xs);
  CHECK(s[0] == 1);
  CHECK(s[1] == -1);

  const std::vector<double> zero{0.0};
  CHECK(signs_from_positions(zero)[0] == 1);  // sgn(0) := +1

  const std::vector<double> saturated{1.0, -1.0, 1.0};
  const auto sat = signs_from_positions(saturated);
  CHECK(sat == SpinConfig({1, -1, 1}));
}

TEST_CASE("brute force on two spins") {
  {
    const auto [s, e] = brute_force_ground_state(two_spin(1.0));
    CHECK(e == -1.0);
    CHECK(s == SpinConfig({1, 1}));  // aligned; lex tie-break picks +1 first
  }
  {
    const auto [s, e] = brute_force_ground_state(two_spin(-1.0));
    CHECK(e == -1.0);
    CHECK(s == SpinConfig({1, -1}));  // anti-aligned
  }
}

TEST_CASE("brute force matches an independent enumeration") {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto inst = gen_random_dense(10, seed);
    // Second, independently written loop: full mask enumeration with the
    // oracle evaluator.
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
      best = std::min(best, energy_oracle(inst, spins_from_mask(10, mask)));
    }
    const auto [s, e] = brute_force_ground_state(inst);
    CHECK(e == best);
    CHECK(ising_energy(inst, s) == e);
    CHECK(s[0] == 1);  // spin-flip degeneracy resolved lexicographically
  }
}

TEST_CASE("brute force rejects n > 24") {
  const auto inst = gen_random_dense(25, 1);
  CHECK_THROWS_AS(brute_force_ground_state(inst), std::invalid_argument);
}

TEST_CASE("instance JSON round trip") {
  const auto inst = gen_random_dense(30, 55, "roundtrip");
  const auto restored = instance_from_json(instance_to_json(inst));
  CHECK(restored.n() == inst.n());
  CHECK(restored.label() == inst.label());
  bool equal = true;
  for (std::size_t k = 0; k < inst.couplings().size(); ++k) {
    equal = equal && inst.couplings()[k] == restored.couplings()[k];
  }
  CHECK(equal);

  CHECK_THROWS_AS(instance_from_json("not json"), ParseError);
  CHECK_THROWS_AS(instance_from_json("{\"n\": 3}"), ParseError);
  CHECK_THROWS_AS(instance_from_json("{\"n\": 2, \"edges\": [[0, 0, 1.0]]}"), ParseError);
}
