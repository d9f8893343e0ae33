#pragma once
/*
  Synthetic graphs and seed sets. All randomness comes from PhiloxStream, so
  a (spec, seed) pair produces the same graph on every platform. Structure
  and transmission probabilities use separate streams of the same seed.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/io.hpp"
#include "dmpinf/rng.hpp"

namespace dmpinf {

enum class Family { random_regular, erdos_renyi, random_tree, cycle, path, star };

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Family parse_family(std::string_view name) {
  if (name == "random_regular" || name == "regular") return Family::random_regular;
  if (name == "erdos_renyi" || name == "er") return Family::erdos_renyi;
  if (name == "random_tree" || name == "tree") return Family::random_tree;
  if (name == "cycle") return Family::cycle;
  if (name == "path") return Family::path;
  if (name == "star") return Family::star;
  throw std::invalid_argument("unknown graph family '" + std::string(name) + "'");
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::random_regular: return "random_regular";
    case Family::erdos_renyi: return "erdos_renyi";
    case Family::random_tree: return "random_tree";
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::star: return "star";
  }
  return "unknown";
}

/// Distribution of transmission probabilities: constant c or uniform [lo, hi].
/// Symmetric draws one value per edge for both arcs; asymmetric one per arc.
struct BDistribution {
  double lo = 0.0;
  double hi = 0.0;
  bool symmetric = true;

  static BDistribution constant(double c, bool symmetric = true) { return {c, c, symmetric}; }
  static BDistribution uniform(double lo, double hi, bool symmetric = true) { return {lo, hi, symmetric}; }

  /// "const:<c>" or "uniform:<lo>:<hi>"
  static BDistribution parse(std::string_view text, bool symmetric = true) {
    const auto bad = [&] { return std::invalid_argument("bad b distribution '" + std::string(text) + "'"); };
    const auto parts = [&] {
      std::vector<std::string_view> out;
      std::size_t start = 0;
      while (true) {
        const auto colon = text.find(':', start);
        out.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
      }
      return out;
    }();
    double a = 0.0;
    double b = 0.0;
    if (parts.size() == 2 && parts[0] == "const" && detail::parse_real(parts[1], a)) {
      BDistribution d = constant(a, symmetric);
      d.validate();
      return d;
    }
    if (parts.size() == 3 && parts[0] == "uniform" && detail::parse_real(parts[1], a) &&
        detail::parse_real(parts[2], b)) {
      BDistribution d = uniform(a, b, symmetric);
      d.validate();
      return d;
    }
    throw bad();
  }

  void validate() const {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
      throw std::invalid_argument("b distribution must satisfy 0 <= lo <= hi <= 1");
    }
  }

  template <class Rng>
  double draw(Rng& rng) const {
    if (lo == hi) return lo;
    return std::min(hi, lo + (hi - lo) * uniform01(rng));
  }
};

struct GenSpec {
  Family family = Family::random_regular;
  std::size_t nodes = 0;
  std::size_t degree = 3;   // random_regular
  double edge_prob = 0.0;   // erdos_renyi
  BDistribution b = BDistribution::constant(0.5);
  std::uint64_t seed = 1;
  std::size_t max_restarts = 1000;  // random_regular pairing model
};

namespace detail {

inline constexpr std::uint64_t kStructureStream = 0;
inline constexpr std::uint64_t kWeightStream = 1;
inline constexpr std::uint64_t kSeedSetStream = 2;

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

/// Pairing (configuration) model; an attempt is abandoned at its first
/// self-loop or repeated edge.
inline EdgeList random_regular_edges(std::size_t n, std::size_t d, std::size_t max_restarts, PhiloxStream& rng) {
  if ((n * d) % 2 != 0) throw GenerationError("random regular graph needs N*d even");
  if (d >= n && n > 0 && d > 0) throw GenerationError("random regular graph needs d < N");
  std::vector<NodeId> stubs(n * d);
  for (std::size_t s = 0; s < stubs.size(); ++s) stubs[s] = static_cast<NodeId>(s / d);
  std::vector<NodeId> adj(n * d);
  std::vector<std::uint32_t> fill(n);
  EdgeList edges;
  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    std::fill(fill.begin(), fill.end(), 0);
    edges.clear();
    bool ok = true;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      const std::size_t j = k + 1 + static_cast<std::size_t>(uniform_below(rng, stubs.size() - k - 1));
      std::swap(stubs[k + 1], stubs[j]);
      const NodeId u = stubs[k];
      const NodeId v = stubs[k + 1];
      const auto begin = adj.begin() + static_cast<std::ptrdiff_t>(u * d);
      if (u == v || std::find(begin, begin + fill[u], v) != begin + fill[u]) {
        ok = false;
        break;
      }
      adj[u * d + fill[u]++] = v;
      adj[v * d + fill[v]++] = u;
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (ok) return edges;
  }
  throw GenerationError("pairing model failed after " + std::to_string(max_restarts) + " restarts");
}

/// Uniform labelled tree from a random Pruefer sequence.
inline EdgeList random_tree_edges(std::size_t n, PhiloxStream& rng) {
  EdgeList edges;
  if (n < 2) return edges;
  std::vector<NodeId> code(n - 2);
  for (auto& c : code) c = static_cast<NodeId>(uniform_below(rng, n));
  std::vector<std::size_t> degree(n, 1);
  for (NodeId c : code) ++degree[c];
  // Linear-time decoding: `leaf` is the smallest current leaf.
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::size_t leaf = ptr;
  for (NodeId c : code) {
    edges.emplace_back(static_cast<NodeId>(leaf), c);
    if (--degree[c] == 1 && c < ptr) {
      leaf = c;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(static_cast<NodeId>(leaf), static_cast<NodeId>(n - 1));
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  return edges;
}

}  // namespace detail

inline DirectedGraph generate(const GenSpec& spec) {
  spec.b.validate();
  const std::size_t n = spec.nodes;
  PhiloxStream structure(spec.seed, detail::kStructureStream);
  detail::EdgeList edges;
  switch (spec.family) {
    case Family::random_regular:
      edges = detail::random_regular_edges(n, spec.degree, spec.max_restarts, structure);
      break;
    case Family::erdos_renyi:
      if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
        throw GenerationError("edge probability must lie in [0,1]");
      }
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          if (bernoulli(structure, spec.edge_prob)) edges.emplace_back(u, v);
        }
      }
      break;
    case Family::random_tree:
      edges = detail::random_tree_edges(n, structure);
      break;
    case Family::cycle:
      if (n < 3) throw GenerationError("a cycle needs at least 3 nodes");
      for (std::size_t u = 0; u < n; ++u) edges.emplace_back(std::min(u, (u + 1) % n), std::max(u, (u + 1) % n));
      break;
    case Family::path:
      for (std::size_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
      break;
    case Family::star:
      for (std::size_t u = 1; u < n; ++u) edges.emplace_back(0, u);
      break;
  }
  std::sort(edges.begin(), edges.end());

  PhiloxStream weights(spec.seed, detail::kWeightStream);
  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    const double forward = spec.b.draw(weights);
    const double backward = spec.b.symmetric ? forward : spec.b.draw(weights);
    arcs.push_back({u, v, forward});
    arcs.push_back({v, u, backward});
  }
  return DirectedGraph::from_arcs(n, std::move(arcs));
}

/// max(1, floor(fraction * N))
inline std::size_t seed_count_for_fraction(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("seed fraction must lie in (0,1]");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n))));
}

/// `count` distinct nodes drawn uniformly without replacement, p0 = 1 on them.
inline InitialCondition random_seed_set(const DirectedGraph& g, std::size_t count, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (count == 0 || count > n) {
    throw std::invalid_argument("seed count " + std::to_string(count) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<NodeId> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<NodeId>(i);
  PhiloxStream rng(seed, detail::kSeedSetStream);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(uniform_below(rng, n - k));
    std::swap(nodes[k], nodes[j]);
  }
  return InitialCondition::seeds(n, std::span<const NodeId>(nodes).first(count));
}

}  // namespace dmpinf
