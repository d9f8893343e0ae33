#pragma once
/*
  Dynamic message-passing for the Independent Cascade model.

  The message on arc j -> i is the probability that j is active by time t
  when i is held inactive:

      m_{j->i}(t) = 1 - (1 - p_j(0)) * prod_{l in in(j), l != i} (1 - b_{lj} m_{l->j}(t-1))
      p_i(t)      = 1 - (1 - p_i(0)) * prod_{j in in(i)}         (1 - b_{ji} m_{j->i}(t-1))
      m_{j->i}(0) = p_j(0)

  Leave-one-out products are built from per-node prefix products and a
  running suffix product over the in-arc factors, so one sweep costs O(|E|)
  and never divides by a factor that may be zero.

  Internally messages live in in-slot order (the message on u -> v sits in
  v's in-list), so a node reads its incoming messages contiguously. The
  public API speaks arc ids.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/parallel.hpp"

namespace dmpinf {

/// Messages at time t, indexed by arc id.
struct MessageState {
  std::size_t t = 0;
  std::vector<double> messages;
};

struct FixedPointConfig {
  double tolerance = 1e-9;
  std::size_t max_sweeps = 1000;

  /// tolerance = 1e-9 * |E| (at least 1e-9); max_sweeps = 20 * N capped at 1e6.
  static FixedPointConfig defaults_for(const DirectedGraph& g) {
    FixedPointConfig cfg;
    cfg.tolerance = 1e-9 * static_cast<double>(std::max<std::size_t>(1, g.arc_count()));
    cfg.max_sweeps = std::clamp<std::size_t>(20 * g.node_count(), 1, 1'000'000);
    return cfg;
  }

  void validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("fixed-point tolerance must be positive");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
  }
};

struct DmpOptions {
  std::size_t threads = 1;
};

struct FixedPointReport {
  MarginalReport report;
  bool converged = false;
  std::size_t sweeps = 0;
  double residual = 0.0;
  std::vector<double> messages;  // by arc id
};

namespace detail {

inline constexpr std::size_t kPrefetchDistance = 256;

struct SweepScratch {
  std::vector<double> prefix;
  std::vector<double> factor;
  explicit SweepScratch(std::size_t max_degree) : prefix(max_degree + 1), factor(max_degree) {}
};

inline std::vector<double> slot_order(const DirectedGraph& g, std::span<const double> by_arc) {
  std::vector<double> out(g.arc_count());
  const auto slots = g.in_arc_slots();
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = by_arc[slots[s]];
  return out;
}

inline std::vector<double> arc_order(const DirectedGraph& g, std::span<const double> by_slot) {
  std::vector<double> out(g.arc_count());
  const auto slots = g.in_arc_slots();
  for (std::size_t s = 0; s < out.size(); ++s) out[slots[s]] = by_slot[s];
  return out;
}

/// m(0) in slot order: every slot carries p0 of its arc's source.
inline std::vector<double> initial_slot_messages(const DirectedGraph& g, std::span<const double> p0) {
  std::vector<double> out(g.arc_count());
  const auto slots = g.in_arc_slots();
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = p0[g.source(slots[s])];
  return out;
}

/// Writes the new message of every out-arc of nodes in [begin, end). Both
/// message vectors are in slot order.
///
/// With f_k = 1 - b_k m_k over the in-list of v, the message v -> u leaves
/// out the factor of u -> v. Walking the in-list backwards with a running
/// suffix product gives each leave-one-out product, which is written to the
/// mirror slot holding v -> u.
inline void message_sweep(const DirectedGraph& g, std::span<const double> p0, const double* old, double* next,
                          std::size_t begin, std::size_t end, SweepScratch& scratch) {
  if (begin >= end) return;
  const double* in_b = g.in_slot_b().data();
  const ArcId* mirror = g.in_slot_mirror().data();
  double* prefix = scratch.prefix.data();
  double* factor = scratch.factor.data();
  const std::size_t slot_limit = g.in_slot_end(static_cast<NodeId>(end - 1));
  for (std::size_t v = begin; v < end; ++v) {
    const auto node = static_cast<NodeId>(v);
    const std::size_t slot0 = g.in_slot_begin(node);
    const std::size_t deg = g.in_slot_end(node) - slot0;
    const double stay_inactive = 1.0 - p0[v];
    const std::size_t ahead_end = std::min(slot0 + deg + kPrefetchDistance, slot_limit);
    for (std::size_t ahead = slot0 + kPrefetchDistance; ahead < ahead_end; ++ahead) {
      if (mirror[ahead] != kNoArc) __builtin_prefetch(next + mirror[ahead], 1);
    }

    prefix[0] = 1.0;
    for (std::size_t k = 0; k < deg; ++k) {
      factor[k] = 1.0 - in_b[slot0 + k] * old[slot0 + k];
      prefix[k + 1] = prefix[k] * factor[k];
    }
    double suffix = 1.0;
    for (std::size_t k = deg; k-- > 0;) {
      const ArcId out = mirror[slot0 + k];
      if (out != kNoArc) next[out] = 1.0 - stay_inactive * (prefix[k] * suffix);
      suffix *= factor[k];
    }
    if (g.has_unpaired_out(node)) {
      for (ArcId e = g.out_begin(node); e < g.out_end(node); ++e) {
        if (g.reverse(e) == kNoArc) next[g.arc_slot(e)] = 1.0 - stay_inactive * prefix[deg];
      }
    }
  }
}

/// Marginals from slot-ordered messages.
inline std::vector<double> marginals_from_slots(const DirectedGraph& g, std::span<const double> p0,
                                                std::span<const double> messages) {
  std::vector<double> out(g.node_count());
  const double* in_b = g.in_slot_b().data();
  for (NodeId i = 0; i < g.node_count(); ++i) {
    double product = 1.0;
    for (std::size_t s = g.in_slot_begin(i); s < g.in_slot_end(i); ++s) product *= 1.0 - in_b[s] * messages[s];
    out[i] = 1.0 - (1.0 - p0[i]) * product;
  }
  return out;
}

/// One synchronous sweep old -> next over slot-ordered messages. Returns
/// sum |next - old| when `residual` is set, 0 otherwise.
inline double sweep(const DirectedGraph& g, std::span<const double> p0, std::span<const double> old,
                    std::span<double> next, std::size_t threads, bool residual = true) {
  const std::size_t n = g.node_count();
  const std::size_t max_deg = g.max_in_degree();
  parallel_chunks(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    SweepScratch scratch(max_deg);
    message_sweep(g, p0, old.data(), next.data(), begin, end, scratch);
  });
  if (!residual) return 0.0;
  // A chunk's writes are scattered, so the residual is summed per slot range
  // in a second pass, chunk by chunk in order.
  std::vector<double> partial(chunk_count(n, threads), 0.0);
  parallel_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double r = 0.0;
    if (begin < end) {
      const std::size_t first = g.in_slot_begin(static_cast<NodeId>(begin));
      const std::size_t last = g.in_slot_end(static_cast<NodeId>(end - 1));
      for (std::size_t s = first; s < last; ++s) r += std::abs(next[s] - old[s]);
    }
    partial[c] = r;
  });
  double total = 0.0;
  for (double r : partial) total += r;
  return total;
}

/// Slot-ordered messages after t synchronous steps.
inline std::vector<double> slot_messages_after(const DirectedGraph& g, std::span<const double> p0, std::size_t t,
                                               std::size_t threads) {
  std::vector<double> cur = initial_slot_messages(g, p0);
  std::vector<double> nxt(cur.size());
  for (std::size_t step = 0; step < t; ++step) {
    sweep(g, p0, cur, nxt, threads, false);
    std::swap(cur, nxt);
  }
  return cur;
}

}  // namespace detail

/// m_{i->j}(0) = p_i(0) for every arc.
inline MessageState initial_messages(const DirectedGraph& g, const InitialCondition& p0) {
  p0.check_matches(g);
  MessageState s;
  s.messages.resize(g.arc_count());
  for (ArcId e = 0; e < g.arc_count(); ++e) s.messages[e] = p0[g.source(e)];
  return s;
}

/// Synchronous update: every new message is computed from state.messages only.
inline MessageState dmp_step(const DirectedGraph& g, const InitialCondition& p0, const MessageState& state,
                             const DmpOptions& opts = {}) {
  p0.check_matches(g);
  if (state.messages.size() != g.arc_count()) {
    throw std::invalid_argument("message vector is not aligned with the arc ids");
  }
  const std::vector<double> old = detail::slot_order(g, state.messages);
  std::vector<double> next(old.size());
  detail::sweep(g, p0.values(), old, next, opts.threads, false);
  return MessageState{state.t + 1, detail::arc_order(g, next)};
}

/// Marginals at horizon state.t + 1 from messages at state.t.
inline MarginalReport dmp_marginals(const DirectedGraph& g, const InitialCondition& p0,
                                    const MessageState& state) {
  p0.check_matches(g);
  if (state.messages.size() != g.arc_count()) {
    throw std::invalid_argument("message vector is not aligned with the arc ids");
  }
  return MarginalReport::from_marginals(
      Horizon::finite(state.t + 1),
      detail::marginals_from_slots(g, p0.values(), detail::slot_order(g, state.messages)));
}

/// Messages after t synchronous steps from the initialization.
inline MessageState dmp_messages(const DirectedGraph& g, const InitialCondition& p0, std::size_t t,
                                 const DmpOptions& opts = {}) {
  p0.check_matches(g);
  return MessageState{t, detail::arc_order(g, detail::slot_messages_after(g, p0.values(), t, opts.threads))};
}

/// Finite-horizon estimate: messages are advanced to T-1 and the marginals
/// are read off at T. T = 0 returns p(0).
inline MarginalReport dmp_est(const DirectedGraph& g, const InitialCondition& p0, std::size_t horizon,
                              const DmpOptions& opts = {}) {
  p0.check_matches(g);
  const auto v = p0.values();
  if (horizon == 0) return MarginalReport::from_marginals(Horizon::finite(0), std::vector<double>(v.begin(), v.end()));
  const std::vector<double> m = detail::slot_messages_after(g, v, horizon - 1, opts.threads);
  return MarginalReport::from_marginals(Horizon::finite(horizon), detail::marginals_from_slots(g, v, m));
}

/// Marginals p_i(t) for every t = 0..T; entry [t] is the horizon-t report.
inline std::vector<MarginalReport> dmp_trajectory(const DirectedGraph& g, const InitialCondition& p0,
                                                  std::size_t horizon, const DmpOptions& opts = {}) {
  p0.check_matches(g);
  const auto v = p0.values();
  std::vector<MarginalReport> out;
  out.reserve(horizon + 1);
  out.push_back(MarginalReport::from_marginals(Horizon::finite(0), std::vector<double>(v.begin(), v.end())));
  std::vector<double> cur = detail::initial_slot_messages(g, v);
  std::vector<double> nxt(cur.size());
  for (std::size_t t = 1; t <= horizon; ++t) {
    out.push_back(MarginalReport::from_marginals(Horizon::finite(t), detail::marginals_from_slots(g, v, cur)));
    if (t == horizon) break;
    detail::sweep(g, v, cur, nxt, opts.threads, false);
    std::swap(cur, nxt);
  }
  return out;
}

/// Large-time fixed point, iterated by synchronous sweeps until the L1
/// change of the message vector is at most cfg.tolerance.
inline FixedPointReport dmp_inf(const DirectedGraph& g, const InitialCondition& p0,
                                const FixedPointConfig& cfg, const DmpOptions& opts = {}) {
  cfg.validate();
  p0.check_matches(g);
  const auto v = p0.values();
  std::vector<double> cur = detail::initial_slot_messages(g, v);
  std::vector<double> nxt(cur.size());
  FixedPointReport out;
  while (out.sweeps < cfg.max_sweeps) {
    out.residual = detail::sweep(g, v, cur, nxt, opts.threads, true);
    ++out.sweeps;
    std::swap(cur, nxt);
    if (out.residual <= cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.report = MarginalReport::from_marginals(Horizon::infinite(), detail::marginals_from_slots(g, v, cur));
  out.messages = detail::arc_order(g, cur);
  return out;
}

}  // namespace dmpinf
