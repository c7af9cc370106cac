#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Problem representation: Ising instances with a dense symmetric coupling
// matrix, MAX-CUT graphs, the bridge between them, energy/cut evaluation,
// random instance generation and file ingestion (G-set text and a JSON
// instance document).

namespace sbopt {

// Spin assignment; every entry is +1 or -1.
class SpinConfig {
 public:
  explicit SpinConfig(std::vector<std::int8_t> spins);

  // Skips validation; for producers that construct +-1 values directly.
  static SpinConfig unchecked(std::vector<std::int8_t> spins);

  std::size_t size() const noexcept { return spins_.size(); }
  std::int8_t operator[](std::size_t i) const noexcept { return spins_[i]; }
  const std::vector<std::int8_t>& values() const noexcept { return spins_; }
  SpinConfig negated() const;

  bool operator==(const SpinConfig&) const = default;

 private:
  SpinConfig() = default;
  std::vector<std::int8_t> spins_;
};

// One coupling entry used when assembling an instance from a sparse list.
struct CouplingEntry {
  std::size_t i;
  std::size_t j;
  double value;
};

// Symmetric zero-diagonal coupling matrix J, stored dense row-major. The
// dense view is canonical; all semantics are defined on it.
class IsingInstance {
 public:
  IsingInstance(std::size_t n, std::vector<double> couplings, std::string label = {});

  // Builds the symmetric matrix from entries (i != j); both triangles are
  // filled. A duplicate unordered pair is an error.
  static IsingInstance from_entries(std::size_t n, std::span<const CouplingEntry> entries,
                                    std::string label = {});

  std::size_t n() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  double coupling(std::size_t i, std::size_t j) const noexcept { return j_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {j_.data() + i * n_, n_};
  }
  std::span<const double> couplings() const noexcept { return j_; }
  bool all_zero() const noexcept;

 private:
  std::size_t n_;
  std::vector<double> j_;
  std::string label_;
};

// Undirected weighted edge, 0-based endpoints.
struct CutEdge {
  std::size_t i;
  std::size_t j;
  long long w;

  bool operator==(const CutEdge&) const = default;
};

// MAX-CUT problem graph. No self-loops, no duplicate undirected edge.
class CutGraph {
 public:
  CutGraph(std::size_t n, std::vector<CutEdge> edges);

  std::size_t n() const noexcept { return n_; }
  std::span<const CutEdge> edges() const noexcept { return edges_; }
  long long total_weight() const noexcept;

  bool operator==(const CutGraph&) const = default;

 private:
  std::size_t n_;
  std::vector<CutEdge> edges_;
};

// E = -1/2 sum_ij J_ij s_i s_j. Exact for integral couplings.
double ising_energy(const IsingInstance& instance, const SpinConfig& spins);

// Total weight of edges crossing the partition: sum_e w_e (1 - s_i s_j)/2.
long long cut_value(const CutGraph& graph, const SpinConfig& spins);

// J_ij = J_ji = -w for every edge; then cut(s) = (W - E(s))/2 with W the
// total edge weight, so minimizing the energy maximizes the cut.
IsingInstance maxcut_to_ising(const CutGraph& graph);

// Dense instance with independent +-1 couplings above the diagonal (row-major
// upper-triangle draw order), mirrored below. Deterministic in (n, seed).
IsingInstance gen_random_dense(std::size_t n, std::uint64_t seed, std::string label = {});

// s_i = +1 if x_i >= 0 else -1 (sgn(0) := +1).
SpinConfig signs_from_positions(std::span<const double> x);

// Exhaustive ground state for n <= 24. Ties resolve to the lexicographically
// smallest configuration with +1 ordered before -1 (so the first spin of the
// result is always +1).
std::pair<SpinConfig, double> brute_force_ground_state(const IsingInstance& instance);

// G-set text: "n m" header, then m lines "i j [w]" with 1-based endpoints and
// default weight 1. Tokens are separated by arbitrary whitespace; blank lines
// are ignored. Errors carry the offending line number.
CutGraph parse_gset(std::istream& in);
CutGraph parse_gset(std::string_view text);
std::string serialize_gset(const CutGraph& graph);

// JSON instance document: {"n": ..., "label": ..., "edges": [[i, j, J_ij]]}
// with 0-based indices and the strict upper triangle listed.
std::string instance_to_json(const IsingInstance& instance);
IsingInstance instance_from_json(std::string_view text);

}  // namespace sbopt
