#pragma once
/*
  Dynamic message-passing for the stochastic Linear Threshold model.

  An inactive node i whose active in-neighbours carry weight
  sum_k b_{ki} x_k >= theta_i activates with probability eta_i per step;
  active nodes stay active. With S_i(t) the probability that the threshold
  is met when every neighbour k is active independently with the cavity
  probability m_{k->i}(t):

      p_i(t+1)    = (1 - eta_i) p_i(t)    + eta_i [p_i(0) + (1 - p_i(0)) S_i(t)]
      m_{i->j}(t+1) = (1 - eta_i) m_{i->j}(t) + eta_i [p_i(0) + (1 - p_i(0)) S_i^{\j}(t)]
      m_{i->j}(0) = p_i(0)

  S^{\j} leaves the arc j -> i out of the configuration sum. The seed term
  keeps initially active nodes active.

  Threshold probabilities are computed by exact enumeration of neighbour
  configurations, depth-first in in-arc order, with two prunes: once the
  running weight meets theta every completion passes, and once the running
  weight plus all remaining weight is clearly below theta none does.
*/

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/parallel.hpp"

namespace dmpinf {

inline constexpr std::size_t kDefaultLtDegreeCap = 20;
inline constexpr double kLtWeightSlack = 1e-12;

struct LtParameters {
  std::vector<double> theta;
  std::vector<double> eta;

  static LtParameters uniform(std::size_t n, double theta = 0.5, double eta = 1.0) {
    return {std::vector<double>(n, theta), std::vector<double>(n, eta)};
  }

  /// Throws std::invalid_argument on size mismatch, values outside [0,1], or
  /// a node whose incoming weights sum to more than 1 + 1e-12.
  void validate(const DirectedGraph& g) const {
    if (theta.size() != g.node_count() || eta.size() != g.node_count()) {
      throw std::invalid_argument("LT parameters do not match the node count");
    }
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!(theta[i] >= 0.0 && theta[i] <= 1.0)) {
        throw std::invalid_argument("theta outside [0,1] at node " + std::to_string(i));
      }
      if (!(eta[i] >= 0.0 && eta[i] <= 1.0)) {
        throw std::invalid_argument("eta outside [0,1] at node " + std::to_string(i));
      }
      double total = 0.0;
      for (ArcId a : g.in_arcs(i)) total += g.b(a);
      if (total > 1.0 + kLtWeightSlack) {
        throw std::invalid_argument("incoming LT weights of node " + std::to_string(i) + " sum to " +
                                    std::to_string(total) + " > 1");
      }
    }
  }
};

struct LtState {
  std::size_t t = 0;
  std::vector<double> node_marginals;
  std::vector<double> arc_messages;
};

struct LtOptions {
  std::size_t degree_cap = kDefaultLtDegreeCap;
  std::size_t threads = 1;
};

class DegreeCapExceeded : public std::runtime_error {
 public:
  DegreeCapExceeded(NodeId node, std::size_t degree, std::size_t cap)
      : std::runtime_error("node " + std::to_string(node) + " has in-degree " + std::to_string(degree) +
                           ", above the enumeration cap " + std::to_string(cap)),
        node_(node) {}
  NodeId node() const { return node_; }

 private:
  NodeId node_;
};

/// True when the weights of the active neighbours meet theta. The sum runs in
/// in-arc order; every simulator and oracle uses this same routine so ties are
/// decided identically everywhere.
inline bool threshold_met(const DirectedGraph& g, NodeId i, double theta,
                          const std::vector<std::uint8_t>& active) {
  double s = 0.0;
  for (ArcId a : g.in_arcs(i)) {
    if (active[g.source(a)]) s += g.b(a);
  }
  return s >= theta;
}

namespace detail {

// Below this margin the fail-prune does not fire, so rounding differences
// between the remaining-weight bound and the actual running sum cannot flip
// a near-tie.
inline constexpr double kLtPruneMargin = 1e-12;

class ThresholdEnumerator {
 public:
  ThresholdEnumerator(std::span<const double> weights, std::span<const double> probs, double theta)
      : w_(weights), q_(probs), theta_(theta), rest_(weights.size() + 1, 0.0) {
    for (std::size_t k = w_.size(); k-- > 0;) rest_[k] = rest_[k + 1] + w_[k];
  }

  /// P(sum_{k != skip} w_k x_k >= theta), x_k ~ Bernoulli(q_k).
  double probability(std::size_t skip) const { return visit(0, skip, 0.0, 1.0); }

  /// Sum of all configuration weights; 1 up to rounding.
  double total_mass(std::size_t skip) const { return mass(0, skip); }

 private:
  double visit(std::size_t k, std::size_t skip, double partial, double weight) const {
    if (partial >= theta_) return weight;
    if (k == w_.size()) return 0.0;
    if (partial + rest_[k] < theta_ - kLtPruneMargin) return 0.0;
    if (k == skip) return visit(k + 1, skip, partial, weight);
    const double q = q_[k];
    double r = 0.0;
    if (q > 0.0) r += visit(k + 1, skip, partial + w_[k], weight * q);
    if (q < 1.0) r += visit(k + 1, skip, partial, weight * (1.0 - q));
    return r;
  }

  double mass(std::size_t k, std::size_t skip) const {
    if (k == w_.size()) return 1.0;
    const double tail = mass(k + 1, skip);
    if (k == skip) return tail;
    return q_[k] * tail + (1.0 - q_[k]) * tail;
  }

  std::span<const double> w_;
  std::span<const double> q_;
  double theta_;
  std::vector<double> rest_;
};

inline constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

}  // namespace detail

inline void check_lt_degree_cap(const DirectedGraph& g, std::size_t cap) {
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.in_degree(i) > cap) throw DegreeCapExceeded(i, g.in_degree(i), cap);
  }
}

inline LtState lt_initial_state(const DirectedGraph& g, const InitialCondition& p0) {
  p0.check_matches(g);
  LtState s;
  s.node_marginals.assign(p0.values().begin(), p0.values().end());
  s.arc_messages.resize(g.arc_count());
  for (ArcId e = 0; e < g.arc_count(); ++e) s.arc_messages[e] = p0[g.source(e)];
  return s;
}

/// One synchronous step t -> t+1.
inline LtState lt_step(const DirectedGraph& g, const LtParameters& params, const InitialCondition& p0,
                       const LtState& state, const LtOptions& opts = {}) {
  p0.check_matches(g);
  check_lt_degree_cap(g, opts.degree_cap);
  if (state.node_marginals.size() != g.node_count() || state.arc_messages.size() != g.arc_count()) {
    throw std::invalid_argument("LT state does not match the graph");
  }
  LtState next{state.t + 1, std::vector<double>(g.node_count()), std::vector<double>(g.arc_count())};
  const std::size_t max_deg = g.max_in_degree();

  parallel_chunks(g.node_count(), opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> w(max_deg);
    std::vector<double> q(max_deg);
    for (std::size_t v = begin; v < end; ++v) {
      const auto i = static_cast<NodeId>(v);
      const auto in = g.in_arcs(i);
      for (std::size_t k = 0; k < in.size(); ++k) {
        w[k] = g.b(in[k]);
        q[k] = state.arc_messages[in[k]];
      }
      const detail::ThresholdEnumerator thr(std::span<const double>(w).first(in.size()),
                                            std::span<const double>(q).first(in.size()), params.theta[i]);
#ifndef NDEBUG
      assert(std::abs(thr.total_mass(detail::kNoSkip) - 1.0) <= 1e-12);
#endif
      const double eta = params.eta[i];
      const double seed = p0[i];
      const auto update = [&](double previous, double passing) {
        return (1.0 - eta) * previous + eta * (seed + (1.0 - seed) * passing);
      };
      next.node_marginals[i] = update(state.node_marginals[i], thr.probability(detail::kNoSkip));

      const std::size_t slot0 = g.in_slot_begin(i);
      double full = -1.0;
      for (ArcId e = g.out_begin(i); e < g.out_end(i); ++e) {
        const ArcId slot = g.reverse_in_slot(e);
        double passing = 0.0;
        if (slot == kNoArc) {
          if (full < 0.0) full = thr.probability(detail::kNoSkip);
          passing = full;
        } else {
          passing = thr.probability(slot - slot0);
        }
        next.arc_messages[e] = update(state.arc_messages[e], passing);
      }
    }
  });
  return next;
}

inline MarginalReport lt_estimate(const DirectedGraph& g, const LtParameters& params,
                                  const InitialCondition& p0, std::size_t horizon,
                                  const LtOptions& opts = {}) {
  params.validate(g);
  check_lt_degree_cap(g, opts.degree_cap);
  LtState s = lt_initial_state(g, p0);
  for (std::size_t t = 0; t < horizon; ++t) s = lt_step(g, params, p0, s, opts);
  return MarginalReport::from_marginals(Horizon::finite(horizon), std::move(s.node_marginals));
}

}  // namespace dmpinf
