#pragma once
/*
  Exact Independent Cascade marginals by live-edge enumeration.

  For a liveness realization d, N_i^T[d] is the set of nodes other than i
  from which i is reachable over live arcs in at most T hops. Then

      p_i(T) = 1 - (1 - p_i(0)) * < prod_{l in N_i^T[d]} (1 - p_l(0)) >_d

  which handles arbitrary probabilistic seeding without enumerating initial
  sets. Arcs with b in {0, 1} are deterministic and are not enumerated.

  Liveness coupling: with per-edge coupling the two arcs of an undirected
  edge share one indicator; with per-arc coupling every arc has its own. For
  symmetric b both give the same marginals, because a cascade only ever uses
  one direction of an edge. Asymmetric b requires per-arc coupling.
*/

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmpinf/graph.hpp"

namespace dmpinf {

enum class LivenessCoupling { automatic, per_arc, per_edge };

inline constexpr std::size_t kDefaultOracleCap = 20;

class OracleCapExceeded : public std::runtime_error {
 public:
  OracleCapExceeded(std::size_t variables, std::size_t cap)
      : std::runtime_error("exact oracle needs " + std::to_string(variables) +
                           " random liveness indicators, above the cap " + std::to_string(cap)) {}
};

struct OracleOptions {
  LivenessCoupling coupling = LivenessCoupling::automatic;
  /// Maximum number of enumerated (non-deterministic) liveness indicators.
  std::size_t cap = kDefaultOracleCap;
};

/// True when b(u->v) == b(v->u) for every arc pair.
inline bool has_symmetric_b(const DirectedGraph& g) {
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const ArcId r = g.reverse(e);
    if (r != kNoArc && g.b(r) != g.b(e)) return false;
  }
  return true;
}

namespace detail {

struct LivenessVariable {
  double b = 0.0;
  ArcId first = kNoArc;
  ArcId second = kNoArc;
};

inline std::vector<LivenessVariable> liveness_variables(const DirectedGraph& g, LivenessCoupling coupling) {
  bool per_edge = false;
  switch (coupling) {
    case LivenessCoupling::per_arc: per_edge = false; break;
    case LivenessCoupling::per_edge:
      if (!has_symmetric_b(g)) {
        throw std::invalid_argument("per-edge liveness requires b(u->v) == b(v->u) on every edge");
      }
      per_edge = true;
      break;
    case LivenessCoupling::automatic: per_edge = has_symmetric_b(g); break;
  }
  std::vector<LivenessVariable> vars;
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const ArcId r = g.reverse(e);
    if (per_edge && r != kNoArc) {
      if (g.source(e) < g.target(e)) vars.push_back({g.b(e), e, r});
    } else {
      vars.push_back({g.b(e), e, kNoArc});
    }
  }
  return vars;
}

}  // namespace detail

namespace detail {

// Random indicators that can lie on a live path of at most `max_hops` arcs
// ending at `target`. Arc x->y qualifies when y reaches the target within
// max_hops - 1 arcs without passing through x; everything else is summed out.
inline std::vector<std::size_t> relevant_variables(const DirectedGraph& g, const std::vector<LivenessVariable>& vars,
                                                   NodeId target, std::size_t max_hops) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n);
  std::vector<NodeId> queue;
  std::vector<char> cached(n, 0);
  std::vector<std::vector<std::size_t>> dist_without(n);

  auto distances_avoiding = [&](NodeId x) -> const std::vector<std::size_t>& {
    if (cached[x]) return dist_without[x];
    std::fill(dist.begin(), dist.end(), kUnseen);
    queue.clear();
    dist[target] = 0;
    queue.push_back(target);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      if (dist[u] + 1 >= max_hops) continue;
      for (ArcId a : g.in_arcs(u)) {
        const NodeId l = g.source(a);
        if (l == x || g.b(a) == 0.0 || dist[l] != kUnseen) continue;
        dist[l] = dist[u] + 1;
        queue.push_back(l);
      }
    }
    cached[x] = 1;
    dist_without[x] = dist;
    return dist_without[x];
  };
  auto arc_relevant = [&](ArcId a) {
    if (a == kNoArc) return false;
    const NodeId x = g.source(a);
    const NodeId y = g.target(a);
    if (x == target || max_hops == 0) return false;
    return distances_avoiding(x)[y] != kUnseen;
  };

  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (arc_relevant(vars[k].first) || arc_relevant(vars[k].second)) out.push_back(k);
  }
  return out;
}

}  // namespace detail

/// Exact marginals p_i(T). For each node i the indicators that can carry
/// influence into i within T hops are enumerated; throws OracleCapExceeded
/// when that count exceeds opts.cap for some node. Indicators with b in
/// {0, 1} are fixed and never count.
inline MarginalReport exact_marginals(const DirectedGraph& g, const InitialCondition& p0, Horizon horizon,
                                      const OracleOptions& opts = {}) {
  p0.check_matches(g);
  const std::size_t n = g.node_count();
  const auto vars = detail::liveness_variables(g, opts.coupling);
  const std::size_t max_hops = horizon.steps();

  std::vector<std::uint8_t> live(g.arc_count(), 0);
  std::vector<detail::LivenessVariable> random_vars;
  for (const auto& v : vars) {
    if (v.b == 1.0) {
      live[v.first] = 1;
      if (v.second != kNoArc) live[v.second] = 1;
    } else if (v.b > 0.0) {
      random_vars.push_back(v);
    }
  }

  std::vector<std::vector<std::size_t>> relevant(n);
  std::size_t widest = 0;
  for (NodeId i = 0; i < n; ++i) {
    relevant[i] = detail::relevant_variables(g, random_vars, i, max_hops);
    widest = std::max(widest, relevant[i].size());
  }
  if (widest > opts.cap) throw OracleCapExceeded(widest, opts.cap);

  std::vector<double> q(n, 0.0);
  std::vector<std::size_t> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);

  for (NodeId i = 0; i < n; ++i) {
    for (const auto& v : random_vars) {
      live[v.first] = 0;
      if (v.second != kNoArc) live[v.second] = 0;
    }
    const auto& mine = relevant[i];
    const std::uint64_t configurations = std::uint64_t{1} << mine.size();
    for (std::uint64_t mask = 0; mask < configurations; ++mask) {
      double weight = 1.0;
      for (std::size_t k = 0; k < mine.size(); ++k) {
        const bool on = (mask >> k) & 1u;
        const auto& v = random_vars[mine[k]];
        weight *= on ? v.b : 1.0 - v.b;
        live[v.first] = on;
        if (v.second != kNoArc) live[v.second] = on;
      }
      // reverse BFS over live in-arcs
      std::fill(dist.begin(), dist.end(), kUnseen);
      queue.clear();
      dist[i] = 0;
      queue.push_back(i);
      double product = 1.0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        if (dist[u] >= max_hops) continue;
        for (ArcId a : g.in_arcs(u)) {
          const NodeId l = g.source(a);
          if (!live[a] || dist[l] != kUnseen) continue;
          dist[l] = dist[u] + 1;
          queue.push_back(l);
          product *= 1.0 - p0[l];
        }
      }
      q[i] += weight * product;
    }
  }

  std::vector<double> p(n);
  for (NodeId i = 0; i < n; ++i) {
    const double not_reached = std::clamp(q[i], 0.0, 1.0);
    p[i] = 1.0 - (1.0 - p0[i]) * not_reached;
  }
  return MarginalReport::from_marginals(horizon, std::move(p));
}

/// The graph with every arc incident to `removed` deleted.
inline DirectedGraph cavity_graph(const DirectedGraph& g, NodeId removed) {
  std::vector<Arc> kept;
  for (const Arc& a : g.arcs()) {
    if (a.source != removed && a.target != removed) kept.push_back(a);
  }
  return DirectedGraph::from_arcs(g.node_count(), std::move(kept));
}

/// Exact conditional probabilities p_{j->i}(T), indexed by arc id: the
/// marginal of j at T in the graph from which i has been removed.
inline std::vector<double> exact_cavity_messages(const DirectedGraph& g, const InitialCondition& p0,
                                                 Horizon horizon, const OracleOptions& opts = {}) {
  p0.check_matches(g);
  std::vector<double> out(g.arc_count(), 0.0);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto in = g.in_arcs(i);
    if (in.empty()) continue;
    const DirectedGraph cavity = cavity_graph(g, i);
    const MarginalReport r = exact_marginals(cavity, p0, horizon, opts);
    for (ArcId a : in) out[a] = r.marginals[g.source(a)];
  }
  return out;
}

}  // namespace dmpinf
