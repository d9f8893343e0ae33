#pragma once
/*
  Core data types shared by every estimator.

  DirectedGraph is an immutable arc list in CSR layout. Arc ids are ordered by
  (source, target), so the out-arcs of a node occupy a contiguous id range;
  in-arcs are reached through a second CSR index ordered by (target, source).
  Every per-arc array in the library (messages, liveness, b) is indexed by arc
  id.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmpinf {

using NodeId = std::uint32_t;
using ArcId = std::uint32_t;

inline constexpr ArcId kNoArc = std::numeric_limits<ArcId>::max();

/// One directed arc with its transmission probability.
struct Arc {
  NodeId source = 0;
  NodeId target = 0;
  double b = 0.0;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Validates and compacts an arc list. Throws std::invalid_argument on an
  /// out-of-range endpoint, a self-loop, a duplicate (source, target) pair or
  /// a probability outside [0, 1].
  static DirectedGraph from_arcs(std::size_t node_count, std::vector<Arc> arcs,
                                 std::vector<std::string> labels = {}) {
    if (node_count > std::numeric_limits<NodeId>::max()) {
      throw std::invalid_argument("node_count exceeds the NodeId range");
    }
    if (arcs.size() >= kNoArc) {
      throw std::invalid_argument("arc count exceeds the ArcId range");
    }
    if (!labels.empty() && labels.size() != node_count) {
      throw std::invalid_argument("label map must name every node");
    }
    for (const Arc& a : arcs) {
      if (a.source >= node_count || a.target >= node_count) {
        throw std::invalid_argument("arc endpoint out of range: " + std::to_string(a.source) +
                                    " -> " + std::to_string(a.target));
      }
      if (a.source == a.target) {
        throw std::invalid_argument("self-loop on node " + std::to_string(a.source));
      }
      if (!(a.b >= 0.0 && a.b <= 1.0)) {
        throw std::invalid_argument("transmission probability outside [0,1] on arc " +
                                    std::to_string(a.source) + " -> " + std::to_string(a.target));
      }
    }
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
      return x.source != y.source ? x.source < y.source : x.target < y.target;
    });
    for (std::size_t e = 1; e < arcs.size(); ++e) {
      if (arcs[e].source == arcs[e - 1].source && arcs[e].target == arcs[e - 1].target) {
        throw std::invalid_argument("duplicate arc " + std::to_string(arcs[e].source) + " -> " +
                                    std::to_string(arcs[e].target));
      }
    }

    DirectedGraph g;
    g.node_count_ = node_count;
    g.labels_ = std::move(labels);
    const std::size_t m = arcs.size();
    g.source_.resize(m);
    g.target_.resize(m);
    g.b_.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
      g.source_[e] = arcs[e].source;
      g.target_[e] = arcs[e].target;
      g.b_[e] = arcs[e].b;
    }

    g.out_offsets_.assign(node_count + 1, 0);
    g.in_offsets_.assign(node_count + 1, 0);
    for (std::size_t e = 0; e < m; ++e) {
      ++g.out_offsets_[g.source_[e] + 1];
      ++g.in_offsets_[g.target_[e] + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
    for (NodeId v = 0; v < node_count; ++v) g.max_in_degree_ = std::max(g.max_in_degree_, g.in_degree(v));

    // Arc ids are sorted by source, so filling in id order leaves every
    // in-list sorted by source as well.
    g.in_arcs_.resize(m);
    std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (std::size_t e = 0; e < m; ++e) {
      g.in_arcs_[cursor[g.target_[e]]++] = static_cast<ArcId>(e);
    }

    g.reverse_.assign(m, kNoArc);
    g.reverse_in_slot_.assign(m, kNoArc);
    for (std::size_t e = 0; e < m; ++e) {
      const ArcId r = g.find_arc(g.target_[e], g.source_[e]);
      g.reverse_[e] = r;
    }
    // reverse_in_slot_[e] is the position of arc (target -> source) inside the
    // in-list of source(e): the factor to leave out when sending along e.
    g.in_b_.resize(m);
    g.arc_slot_.resize(m);
    for (NodeId v = 0; v < node_count; ++v) {
      for (std::size_t slot = g.in_offsets_[v]; slot < g.in_offsets_[v + 1]; ++slot) {
        const ArcId in_arc = g.in_arcs_[slot];
        const ArcId out_arc = g.reverse_[in_arc];
        g.in_b_[slot] = g.b_[in_arc];
        g.arc_slot_[in_arc] = static_cast<ArcId>(slot);
        if (out_arc != kNoArc) g.reverse_in_slot_[out_arc] = static_cast<ArcId>(slot);
      }
    }
    g.slot_mirror_.resize(m);
    for (std::size_t slot = 0; slot < m; ++slot) {
      const ArcId r = g.reverse_[g.in_arcs_[slot]];
      g.slot_mirror_[slot] = r == kNoArc ? kNoArc : g.arc_slot_[r];
    }
    g.unpaired_out_.assign(node_count, 0);
    for (std::size_t e = 0; e < m; ++e) {
      if (g.reverse_[e] == kNoArc) g.unpaired_out_[g.source_[e]] = 1;
    }
    return g;
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t arc_count() const { return source_.size(); }

  NodeId source(ArcId e) const { return source_[e]; }
  NodeId target(ArcId e) const { return target_[e]; }
  double b(ArcId e) const { return b_[e]; }
  std::span<const double> b_values() const { return b_; }
  std::span<const NodeId> sources() const { return source_; }
  std::span<const NodeId> targets() const { return target_; }

  /// Arc id of the opposite arc (target -> source), or kNoArc.
  ArcId reverse(ArcId e) const { return reverse_[e]; }
  ArcId reverse_in_slot(ArcId e) const { return reverse_in_slot_[e]; }

  ArcId out_begin(NodeId v) const { return static_cast<ArcId>(out_offsets_[v]); }
  ArcId out_end(NodeId v) const { return static_cast<ArcId>(out_offsets_[v + 1]); }
  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }

  std::size_t in_slot_begin(NodeId v) const { return in_offsets_[v]; }
  std::size_t in_slot_end(NodeId v) const { return in_offsets_[v + 1]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }
  std::span<const ArcId> in_arcs(NodeId v) const {
    return std::span<const ArcId>(in_arcs_).subspan(in_offsets_[v], in_degree(v));
  }
  std::span<const ArcId> in_arc_slots() const { return in_arcs_; }
  /// b of each in-slot's arc, in in-slot order.
  std::span<const double> in_slot_b() const { return in_b_; }
  /// In-slot holding arc e; inverse of in_arc_slots().
  ArcId arc_slot(ArcId e) const { return arc_slot_[e]; }
  /// For the arc u -> v in `slot`, the in-slot of v -> u (kNoArc when absent).
  std::span<const ArcId> in_slot_mirror() const { return slot_mirror_; }
  /// True when some out-arc of v has no reverse arc.
  bool has_unpaired_out(NodeId v) const { return unpaired_out_[v] != 0; }

  std::size_t max_in_degree() const { return max_in_degree_; }

  /// Binary search over the sorted out-range of `from`.
  ArcId find_arc(NodeId from, NodeId to) const {
    if (from >= node_count_) return kNoArc;
    const auto first = target_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[from]);
    const auto last = target_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[from + 1]);
    const auto it = std::lower_bound(first, last, to);
    if (it == last || *it != to) return kNoArc;
    return static_cast<ArcId>(it - target_.begin());
  }

  /// True when every arc has a reverse arc, i.e. the graph came from an
  /// undirected edge list.
  bool is_symmetric_structure() const {
    return std::none_of(reverse_.begin(), reverse_.end(), [](ArcId r) { return r == kNoArc; });
  }

  /// Number of undirected edges in the underlying simple graph (an arc pair
  /// counts once).
  std::size_t undirected_edge_count() const {
    std::size_t count = 0;
    for (std::size_t e = 0; e < arc_count(); ++e) {
      if (reverse_[e] == kNoArc || source_[e] < target_[e]) ++count;
    }
    return count;
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> out(arc_count());
    for (std::size_t e = 0; e < arc_count(); ++e) out[e] = {source_[e], target_[e], b_[e]};
    return out;
  }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::size_t node_count_ = 0;
  std::vector<NodeId> source_;
  std::vector<NodeId> target_;
  std::vector<double> b_;
  std::vector<ArcId> out_offsets_{0};
  std::vector<ArcId> in_offsets_{0};
  std::vector<ArcId> in_arcs_;
  std::vector<ArcId> reverse_;
  std::vector<ArcId> reverse_in_slot_;
  std::vector<double> in_b_;
  std::vector<ArcId> arc_slot_;
  std::vector<ArcId> slot_mirror_;
  std::vector<std::uint8_t> unpaired_out_;
  std::vector<std::string> labels_;
  std::size_t max_in_degree_ = 0;
};

/// Node order of a breadth-first traversal over arcs in either direction,
/// one component after another, starting each from its lowest id.
inline std::vector<NodeId> locality_order(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<std::uint8_t> seen(n, 0);
  const auto visit = [&](NodeId w) {
    if (!seen[w]) {
      seen[w] = 1;
      order.push_back(w);
    }
  };
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::size_t head = order.size();
    visit(start);
    for (; head < order.size(); ++head) {
      const NodeId u = order[head];
      for (ArcId e = g.out_begin(u); e < g.out_end(u); ++e) visit(g.target(e));
      for (ArcId a : g.in_arcs(u)) visit(g.source(a));
    }
  }
  return order;
}

/// Isomorphic copy in which node order[k] becomes node k. Labels move with
/// their nodes.
inline DirectedGraph permute_nodes(const DirectedGraph& g, const std::vector<NodeId>& order) {
  const std::size_t n = g.node_count();
  if (order.size() != n) throw std::invalid_argument("permutation does not cover every node");
  std::vector<NodeId> position(n, std::numeric_limits<NodeId>::max());
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || position[order[k]] != std::numeric_limits<NodeId>::max()) {
      throw std::invalid_argument("node order is not a permutation");
    }
    position[order[k]] = static_cast<NodeId>(k);
  }
  std::vector<Arc> arcs = g.arcs();
  for (Arc& a : arcs) {
    a.source = position[a.source];
    a.target = position[a.target];
  }
  std::vector<std::string> labels;
  if (g.has_labels()) {
    labels.resize(n);
    for (std::size_t k = 0; k < n; ++k) labels[k] = g.labels()[order[k]];
  }
  return DirectedGraph::from_arcs(n, std::move(arcs), std::move(labels));
}

/// Per-node initial activation probabilities p(0). Entries equal to exactly 0
/// or 1 encode a deterministic seed set.
class InitialCondition {
 public:
  InitialCondition() = default;

  explicit InitialCondition(std::vector<double> p0) : p0_(std::move(p0)) {
    for (std::size_t i = 0; i < p0_.size(); ++i) {
      if (!(p0_[i] >= 0.0 && p0_[i] <= 1.0)) {
        throw std::invalid_argument("initial probability outside [0,1] at node " +
                                    std::to_string(i));
      }
    }
  }

  static InitialCondition zeros(std::size_t n) { return InitialCondition(std::vector<double>(n, 0.0)); }

  static InitialCondition seeds(std::size_t n, std::span<const NodeId> seed_nodes) {
    std::vector<double> p(n, 0.0);
    for (NodeId s : seed_nodes) {
      if (s >= n) throw std::invalid_argument("seed node out of range");
      p[s] = 1.0;
    }
    return InitialCondition(std::move(p));
  }

  std::size_t size() const { return p0_.size(); }
  double operator[](std::size_t i) const { return p0_[i]; }
  std::span<const double> values() const { return p0_; }

  /// k = sum_i p_i(0)
  double budget() const { return std::accumulate(p0_.begin(), p0_.end(), 0.0); }

  bool is_deterministic() const {
    return std::all_of(p0_.begin(), p0_.end(), [](double p) { return p == 0.0 || p == 1.0; });
  }

  void check_matches(const DirectedGraph& g) const {
    if (p0_.size() != g.node_count()) {
      throw std::invalid_argument("initial condition has " + std::to_string(p0_.size()) +
                                  " entries, graph has " + std::to_string(g.node_count()) +
                                  " nodes");
    }
  }

 private:
  std::vector<double> p0_;
};

/// Either a finite number of steps or the large-time limit.
class Horizon {
 public:
  constexpr Horizon() = default;
  static constexpr Horizon finite(std::size_t steps) { return Horizon(steps, false); }
  static constexpr Horizon infinite() { return Horizon(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::size_t steps() const {
    return infinite_ ? std::numeric_limits<std::size_t>::max() : steps_;
  }
  constexpr bool operator==(const Horizon&) const = default;

 private:
  constexpr Horizon(std::size_t steps, bool inf) : steps_(steps), infinite_(inf) {}
  std::size_t steps_ = 0;
  bool infinite_ = false;
};

inline double sum_of(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

struct MarginalReport {
  Horizon horizon;
  std::vector<double> marginals;
  double sigma = 0.0;

  static MarginalReport from_marginals(Horizon horizon, std::vector<double> marginals) {
    MarginalReport r{horizon, std::move(marginals), 0.0};
    r.sigma = sum_of(r.marginals);
    return r;
  }
};

/// sigma = sum_i p_i(t)
inline double influence_from_marginals(const MarginalReport& report) {
  return sum_of(report.marginals);
}

/// Checks the MarginalReport invariants against the initial condition.
inline void validate_report(const MarginalReport& report, const InitialCondition& p0) {
  if (report.marginals.size() != p0.size()) {
    throw std::logic_error("report size does not match initial condition");
  }
  const double slack = 1e-12 * static_cast<double>(std::max<std::size_t>(1, report.marginals.size()));
  if (std::abs(report.sigma - sum_of(report.marginals)) > slack) {
    throw std::logic_error("sigma disagrees with the sum of marginals");
  }
  for (std::size_t i = 0; i < report.marginals.size(); ++i) {
    const double m = report.marginals[i];
    if (!(m >= 0.0 && m <= 1.0)) throw std::logic_error("marginal outside [0,1]");
    if (m < p0[i] - 1e-12) throw std::logic_error("marginal below its initial value");
  }
}

}  // namespace dmpinf
