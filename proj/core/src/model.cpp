#include "sbopt/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "sbopt/errors.hpp"
#include "sbopt/rng.hpp"

namespace sbopt {

namespace {

std::uint64_t pair_key(std::size_t i, std::size_t j) {
  const auto lo = static_cast<std::uint64_t>(std::min(i, j));
  const auto hi = static_cast<std::uint64_t>(std::max(i, j));
  return (hi << 32) | lo;
}

void check_same_size(std::size_t n, std::size_t spins, const char* op) {
  if (n != spins) {
    throw std::invalid_argument(std::string(op) + ": spin count " + std::to_string(spins) +
                                " does not match instance size " + std::to_string(n));
  }
}

}  // namespace

SpinConfig::SpinConfig(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (std::int8_t v : spins_) {
    if (v != 1 && v != -1) throw std::invalid_argument("spin values must be +1 or -1");
  }
}

SpinConfig SpinConfig::unchecked(std::vector<std::int8_t> spins) {
  SpinConfig cfg;
  cfg.spins_ = std::move(spins);
  return cfg;
}

SpinConfig SpinConfig::negated() const {
  std::vector<std::int8_t> flipped(spins_.size());
  for (std::size_t i = 0; i < spins_.size(); ++i) flipped[i] = static_cast<std::int8_t>(-spins_[i]);
  return SpinConfig::unchecked(std::move(flipped));
}

IsingInstance::IsingInstance(std::size_t n, std::vector<double> couplings, std::string label)
    : n_(n), j_(std::move(couplings)), label_(std::move(label)) {
  if (n_ < 1) throw std::invalid_argument("instance size must be >= 1");
  if (j_.size() != n_ * n_) {
    throw std::invalid_argument("coupling matrix must have n*n entries");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (j_[i * n_ + i] != 0.0) throw std::invalid_argument("coupling diagonal must be zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (j_[i * n_ + j] != j_[j * n_ + i]) {
        throw std::invalid_argument("coupling matrix must be symmetric");
      }
    }
  }
}

IsingInstance IsingInstance::from_entries(std::size_t n, std::span<const CouplingEntry> entries,
                                          std::string label) {
  if (n < 1) throw std::invalid_argument("instance size must be >= 1");
  std::vector<double> dense(n * n, 0.0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.i >= n || e.j >= n) throw std::invalid_argument("coupling index out of range");
    if (e.i == e.j) throw std::invalid_argument("diagonal couplings are not allowed");
    if (!seen.insert(pair_key(e.i, e.j)).second) {
      throw std::invalid_argument("duplicate coupling entry (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
    }
    dense[e.i * n + e.j] = e.value;
    dense[e.j * n + e.i] = e.value;
  }
  return IsingInstance(n, std::move(dense), std::move(label));
}

bool IsingInstance::all_zero() const noexcept {
  return std::all_of(j_.begin(), j_.end(), [](double v) { return v == 0.0; });
}

CutGraph::CutGraph(std::size_t n, std::vector<CutEdge> edges) : n_(n), edges_(std::move(edges)) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (e.i >= n_ || e.j >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loops are not allowed");
    if (!seen.insert(pair_key(e.i, e.j)).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
    }
  }
}

long long CutGraph::total_weight() const noexcept {
  long long total = 0;
  for (const auto& e : edges_) total += e.w;
  return total;
}

double ising_energy(const IsingInstance& instance, const SpinConfig& spins) {
  check_same_size(instance.n(), spins.size(), "ising_energy");
  const std::size_t n = instance.n();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.row(i);
    double field = 0.0;
    for (std::size_t j = 0; j < n; ++j) field += row[j] * static_cast<double>(spins[j]);
    total += field * static_cast<double>(spins[i]);
  }
  return -0.5 * total;
}

long long cut_value(const CutGraph& graph, const SpinConfig& spins) {
  check_same_size(graph.n(), spins.size(), "cut_value");
  long long cut = 0;
  for (const auto& e : graph.edges()) {
    if (spins[e.i] != spins[e.j]) cut += e.w;
  }
  return cut;
}

IsingInstance maxcut_to_ising(const CutGraph& graph) {
  if (graph.n() < 1) throw std::invalid_argument("cannot convert an empty graph");
  std::vector<CouplingEntry> entries;
  entries.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) {
    entries.push_back({e.i, e.j, -static_cast<double>(e.w)});
  }
  return IsingInstance::from_entries(graph.n(), entries, "maxcut");
}

IsingInstance gen_random_dense(std::size_t n, std::uint64_t seed, std::string label) {
  if (n < 2) throw std::invalid_argument("random dense instance needs n >= 2");
  Xoshiro256pp rng(seed);
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rng.random_sign();
      dense[i * n + j] = v;
      dense[j * n + i] = v;
    }
  }
  if (label.empty()) {
    label = "dense-n" + std::to_string(n) + "-s" + std::to_string(seed);
  }
  return IsingInstance(n, std::move(dense), std::move(label));
}

SpinConfig signs_from_positions(std::span<const double> x) {
  std::vector<std::int8_t> spins(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) spins[i] = x[i] >= 0.0 ? 1 : -1;
  return SpinConfig::unchecked(std::move(spins));
}

namespace {

// +1 sorts before -1.
bool lex_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] == 1;
  }
  return false;
}

}  // namespace

std::pair<SpinConfig, double> brute_force_ground_state(const IsingInstance& instance) {
  const std::size_t n = instance.n();
  if (n > 24) throw std::invalid_argument("brute force limited to n <= 24");

  // Gray-code walk: one spin flips per visited configuration, so each move
  // costs one row scan. Energies are exact for integral couplings.
  std::vector<std::int8_t> s(n, 1);
  double energy = ising_energy(instance, SpinConfig::unchecked(s));
  std::vector<std::int8_t> best = s;
  double best_energy = energy;

  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < count; ++t) {
    const auto k = static_cast<std::size_t>(std::countr_zero(t));
    const auto row = instance.row(k);
    double field = 0.0;
    for (std::size_t j = 0; j < n; ++j) field += row[j] * static_cast<double>(s[j]);
    energy += 2.0 * static_cast<double>(s[k]) * field;
    s[k] = static_cast<std::int8_t>(-s[k]);
    if (energy < best_energy || (energy == best_energy && lex_less(s, best))) {
      best_energy = energy;
      best = s;
    }
  }
  return {SpinConfig::unchecked(std::move(best)), best_energy};
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream iss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (iss >> tok) tokens.push_back(tok);
  return tokens;
}

long long parse_integer(const std::string& tok, std::size_t line_no, const char* what) {
  long long value = 0;
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line_no, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  return value;
}

}  // namespace

CutGraph parse_gset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  std::size_t n = 0;
  long long m = -1;
  std::vector<CutEdge> edges;
  std::unordered_set<std::uint64_t> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (m < 0) {
      if (tokens.size() != 2) throw ParseError(line_no, "expected header 'n m'");
      const long long header_n = parse_integer(tokens[0], line_no, "vertex count");
      m = parse_integer(tokens[1], line_no, "edge count");
      if (header_n < 1) throw ParseError(line_no, "vertex count must be >= 1");
      if (m < 0) throw ParseError(line_no, "edge count must be >= 0");
      n = static_cast<std::size_t>(header_n);
      edges.reserve(static_cast<std::size_t>(m));
      seen.reserve(static_cast<std::size_t>(m));
      continue;
    }

    if (static_cast<long long>(edges.size()) == m) {
      throw ParseError(line_no, "unexpected line after " + std::to_string(m) + " edges");
    }
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected edge 'i j [w]'");
    }
    const long long i1 = parse_integer(tokens[0], line_no, "endpoint");
    const long long j1 = parse_integer(tokens[1], line_no, "endpoint");
    const long long w = tokens.size() == 3 ? parse_integer(tokens[2], line_no, "weight") : 1;
    if (i1 < 1 || j1 < 1 || i1 > static_cast<long long>(n) || j1 > static_cast<long long>(n)) {
      throw ParseError(line_no, "vertex index out of range [1, " + std::to_string(n) + "]");
    }
    if (i1 == j1) throw ParseError(line_no, "self-loop on vertex " + std::to_string(i1));
    const auto i = static_cast<std::size_t>(i1 - 1);
    const auto j = static_cast<std::size_t>(j1 - 1);
    if (!seen.insert(pair_key(i, j)).second) {
      throw ParseError(line_no, "duplicate edge (" + tokens[0] + ", " + tokens[1] + ")");
    }
    edges.push_back({i, j, w});
  }

  if (m < 0) throw ParseError(line_no ? line_no : 1, "missing header 'n m'");
  if (static_cast<long long>(edges.size()) != m) {
    throw ParseError(line_no ? line_no : 1, "expected " + std::to_string(m) + " edges, got " +
                                                std::to_string(edges.size()));
  }
  return CutGraph(n, std::move(edges));
}

CutGraph parse_gset(std::string_view text) {
  std::istringstream iss{std::string(text)};
  return parse_gset(iss);
}

std::string serialize_gset(const CutGraph& graph) {
  std::ostringstream oss;
  oss << graph.n() << ' ' << graph.edges().size() << '\n';
  for (const auto& e : graph.edges()) {
    oss << (e.i + 1) << ' ' << (e.j + 1) << ' ' << e.w << '\n';
  }
  return oss.str();
}

std::string instance_to_json(const IsingInstance& instance) {
  nlohmann::json doc;
  doc["n"] = instance.n();
  doc["label"] = instance.label();
  auto edges = nlohmann::json::array();
  const std::size_t n = instance.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = instance.coupling(i, j);
      if (v != 0.0) edges.push_back({i, j, v});
    }
  }
  doc["edges"] = std::move(edges);
  return doc.dump();
}

IsingInstance instance_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ParseError(1, "instance document needs fields 'n' and 'edges'");
  }
  const auto n = doc.at("n").get<std::size_t>();
  std::string label = doc.value("label", std::string{});
  std::vector<CouplingEntry> entries;
  entries.reserve(doc.at("edges").size());
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw ParseError(1, "each edge must be a [i, j, value] triple");
    }
    entries.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
  }
  try {
    return IsingInstance::from_entries(n, entries, std::move(label));
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
}

}  // namespace sbopt
