#pragma once
/*
  Structural certificates.

  girth / exactness_certificate: message passing is exact at horizon T when
  the shortest cycle of the underlying undirected graph has length L >= 2T+1.

  spanning_tree_lower_bound: message passing on a spanning forest is exact
  for the forest, and dropping edges can only shrink the cascade, so the
  forest estimate bounds the true influence from below while the full-graph
  estimate bounds it from above.
*/

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/ic_dmp.hpp"
#include "dmpinf/rng.hpp"

namespace dmpinf {

/// Sorted, de-duplicated neighbour lists of the underlying undirected graph.
inline std::vector<std::vector<NodeId>> undirected_adjacency(const DirectedGraph& g) {
  std::vector<std::vector<NodeId>> adj(g.node_count());
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    adj[g.source(e)].push_back(g.target(e));
    adj[g.target(e)].push_back(g.source(e));
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

/// Length of the shortest cycle of the underlying undirected graph; nullopt
/// for a forest. BFS from every node, O(|V| |E|).
inline std::optional<std::size_t> girth(const DirectedGraph& g) {
  const auto adj = undirected_adjacency(g);
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::size_t best = kUnseen;
  std::vector<std::size_t> dist(n);
  std::vector<NodeId> parent(n);
  std::vector<NodeId> queue;
  for (NodeId root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    queue.assign(1, root);
    dist[root] = 0;
    parent[root] = root;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      if (2 * dist[u] >= best) break;
      for (NodeId w : adj[u]) {
        if (dist[w] == kUnseen) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (best == kUnseen) return std::nullopt;
  return best;
}

struct ExactnessCertificate {
  std::optional<std::size_t> girth;  // nullopt = infinite
  Horizon horizon;
  bool exact = false;
};

inline ExactnessCertificate exactness_certificate(const DirectedGraph& g, Horizon horizon) {
  ExactnessCertificate c{girth(g), horizon, false};
  if (!c.girth) {
    c.exact = true;
  } else if (!horizon.is_infinite()) {
    c.exact = *c.girth >= 2 * horizon.steps() + 1;
  }
  return c;
}

enum class TreeStrategy { bfs, random };

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline DirectedGraph subgraph_on_edges(const DirectedGraph& g,
                                       const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<Arc> arcs;
  for (const auto& [u, v] : edges) {
    for (const auto& [from, to] : {std::pair{u, v}, std::pair{v, u}}) {
      const ArcId e = g.find_arc(from, to);
      if (e != kNoArc) arcs.push_back({from, to, g.b(e)});
    }
  }
  return DirectedGraph::from_arcs(g.node_count(), std::move(arcs), g.labels());
}

}  // namespace detail

/// Spanning forest of the underlying undirected graph. Every arc between the
/// endpoints of a kept edge is retained with its original b.
///
/// bfs: one BFS tree per component, rooted at the node maximizing
/// p_i(0) * degree (lowest id on ties), neighbours visited in id order.
/// random: Kruskal over the edges in a seeded random order.
inline DirectedGraph spanning_tree(const DirectedGraph& g, const InitialCondition& p0, TreeStrategy strategy,
                                   std::uint64_t seed = 0) {
  p0.check_matches(g);
  const auto adj = undirected_adjacency(g);
  const std::size_t n = g.node_count();
  std::vector<std::pair<NodeId, NodeId>> kept;

  if (strategy == TreeStrategy::bfs) {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::uint8_t> in_tree(n, 0);
    std::vector<NodeId> component;
    for (NodeId start = 0; start < n; ++start) {
      if (seen[start]) continue;
      component.assign(1, start);
      seen[start] = 1;
      for (std::size_t head = 0; head < component.size(); ++head) {
        for (NodeId w : adj[component[head]]) {
          if (!seen[w]) {
            seen[w] = 1;
            component.push_back(w);
          }
        }
      }
      std::sort(component.begin(), component.end());
      NodeId root = component.front();
      double best = -1.0;
      for (NodeId v : component) {
        const double score = p0[v] * static_cast<double>(adj[v].size());
        if (score > best) {
          best = score;
          root = v;
        }
      }
      std::queue<NodeId> queue;
      queue.push(root);
      in_tree[root] = 1;
      while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        for (NodeId w : adj[u]) {
          if (in_tree[w]) continue;
          in_tree[w] = 1;
          kept.emplace_back(u, w);
          queue.push(w);
        }
      }
    }
  } else {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId w : adj[u]) {
        if (u < w) edges.emplace_back(u, w);
      }
    }
    PhiloxStream rng(seed, 0);
    shuffle_in_place(edges, rng);
    detail::DisjointSets sets(n);
    for (const auto& [u, w] : edges) {
      if (sets.unite(u, w)) kept.emplace_back(u, w);
    }
  }
  return detail::subgraph_on_edges(g, kept);
}

struct BoundBracket {
  Horizon horizon;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t tree_edges = 0;
};

inline BoundBracket spanning_tree_lower_bound(const DirectedGraph& g, const InitialCondition& p0,
                                              Horizon horizon, TreeStrategy strategy,
                                              std::uint64_t tree_seed = 0, const DmpOptions& opts = {}) {
  const DirectedGraph tree = spanning_tree(g, p0, strategy, tree_seed);
  BoundBracket out;
  out.horizon = horizon;
  out.tree_edges = tree.undirected_edge_count();
  if (horizon.is_infinite()) {
    out.lower = dmp_inf(tree, p0, FixedPointConfig::defaults_for(tree), opts).report.sigma;
    out.upper = dmp_inf(g, p0, FixedPointConfig::defaults_for(g), opts).report.sigma;
  } else {
    out.lower = dmp_est(tree, p0, horizon.steps(), opts).sigma;
    out.upper = dmp_est(g, p0, horizon.steps(), opts).sigma;
  }
  return out;
}

}  // namespace dmpinf
