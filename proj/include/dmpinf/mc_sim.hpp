#pragma once
/*
  Monte-Carlo reference estimators.

  Run r of a job seeded with s draws all of its randomness from
  PhiloxStream(s, r). Per-node activation counts are integers, so merging
  the per-thread counters gives the same report at any thread count.
*/

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/lt_dmp.hpp"
#include "dmpinf/parallel.hpp"
#include "dmpinf/rng.hpp"

namespace dmpinf {

struct McReport {
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  Horizon horizon;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  double sigma = 0.0;
};

struct McOptions {
  std::size_t threads = 1;
};

/// Independent Cascade simulator with reusable scratch space. One run costs
/// O(#candidate seeds + arcs leaving activated nodes).
class IcSimulator {
 public:
  IcSimulator(const DirectedGraph& g, const InitialCondition& p0)
      : g_(g), p0_(p0), active_(g.node_count(), 0) {
    p0.check_matches(g);
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (p0[i] > 0.0) candidates_.push_back(i);
    }
  }

  /// Nodes active at the horizon, in activation order. Valid until the next
  /// call.
  template <class Rng>
  const std::vector<NodeId>& run(Horizon horizon, Rng& rng) {
    for (NodeId v : activated_) active_[v] = 0;
    activated_.clear();
    for (NodeId i : candidates_) {
      if (bernoulli(rng, p0_[i])) {
        active_[i] = 1;
        activated_.push_back(i);
      }
    }
    // Each activated node appears in exactly one layer and tries each of its
    // out-arcs once, so every arc's coin is flipped at most once per run.
    std::size_t layer_begin = 0;
    for (std::size_t t = 0; t < horizon.steps(); ++t) {
      const std::size_t layer_end = activated_.size();
      if (layer_begin == layer_end) break;
      for (std::size_t k = layer_begin; k < layer_end; ++k) {
        const NodeId u = activated_[k];
        for (ArcId e = g_.out_begin(u); e < g_.out_end(u); ++e) {
          const NodeId v = g_.target(e);
          if (!active_[v] && bernoulli(rng, g_.b(e))) {
            active_[v] = 1;
            activated_.push_back(v);
          }
        }
      }
      layer_begin = layer_end;
    }
    return activated_;
  }

 private:
  const DirectedGraph& g_;
  const InitialCondition& p0_;
  std::vector<NodeId> candidates_;
  std::vector<std::uint8_t> active_;
  std::vector<NodeId> activated_;
};

/// Synchronous stochastic Linear Threshold simulator.
class LtSimulator {
 public:
  LtSimulator(const DirectedGraph& g, const LtParameters& params, const InitialCondition& p0)
      : g_(g), params_(params), p0_(p0), active_(g.node_count(), 0) {
    p0.check_matches(g);
    params.validate(g);
  }

  template <class Rng>
  const std::vector<std::uint8_t>& run(Horizon horizon, Rng& rng) {
    const std::size_t n = g_.node_count();
    for (NodeId i = 0; i < n; ++i) active_[i] = bernoulli(rng, p0_[i]) ? 1 : 0;
    for (std::size_t t = 0; t < horizon.steps(); ++t) {
      eligible_.clear();
      bool can_change = false;
      for (NodeId i = 0; i < n; ++i) {
        if (!active_[i] && threshold_met(g_, i, params_.theta[i], active_)) {
          eligible_.push_back(i);
          can_change = can_change || params_.eta[i] > 0.0;
        }
      }
      if (!can_change) break;
      flips_.clear();
      for (NodeId i : eligible_) {
        if (bernoulli(rng, params_.eta[i])) flips_.push_back(i);
      }
      for (NodeId i : flips_) active_[i] = 1;
    }
    return active_;
  }

 private:
  const DirectedGraph& g_;
  const LtParameters& params_;
  const InitialCondition& p0_;
  std::vector<std::uint8_t> active_;
  std::vector<NodeId> eligible_;
  std::vector<NodeId> flips_;
};

template <class Rng>
std::vector<std::uint8_t> ic_simulate_once(const DirectedGraph& g, const InitialCondition& p0,
                                           Horizon horizon, Rng& rng) {
  IcSimulator sim(g, p0);
  std::vector<std::uint8_t> out(g.node_count(), 0);
  for (NodeId v : sim.run(horizon, rng)) out[v] = 1;
  return out;
}

template <class Rng>
std::vector<std::uint8_t> lt_simulate_once(const DirectedGraph& g, const LtParameters& params,
                                           const InitialCondition& p0, Horizon horizon, Rng& rng) {
  LtSimulator sim(g, params, p0);
  return sim.run(horizon, rng);
}

namespace detail {

inline McReport finish_report(std::size_t runs, std::uint64_t seed, Horizon horizon,
                              const std::vector<std::uint64_t>& counts) {
  McReport r;
  r.runs = runs;
  r.seed = seed;
  r.horizon = horizon;
  r.estimates.resize(counts.size());
  r.std_errors.resize(counts.size());
  const double R = static_cast<double>(runs);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = static_cast<double>(counts[i]) / R;
    r.estimates[i] = p;
    r.std_errors[i] = std::sqrt(p * (1.0 - p) / R);
  }
  r.sigma = sum_of(r.estimates);
  return r;
}

/// Runs body(run_index, counts) for every run, splitting runs across
/// threads, and returns the summed counters.
template <class Body>
std::vector<std::uint64_t> count_runs(std::size_t n, std::size_t runs, std::size_t threads, Body&& body) {
  std::vector<std::vector<std::uint64_t>> partial(chunk_count(runs, threads));
  parallel_chunks(runs, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    partial[c].assign(n, 0);
    body(begin, end, partial[c]);
  });
  std::vector<std::uint64_t> total(n, 0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < p.size(); ++i) total[i] += p[i];
  }
  return total;
}

}  // namespace detail

inline McReport ic_mc_marginals(const DirectedGraph& g, const InitialCondition& p0, Horizon horizon,
                                std::size_t runs, std::uint64_t seed, const McOptions& opts = {}) {
  if (runs < 1) throw std::invalid_argument("at least one Monte-Carlo run is required");
  p0.check_matches(g);
  const auto counts = detail::count_runs(
      g.node_count(), runs, opts.threads,
      [&](std::size_t begin, std::size_t end, std::vector<std::uint64_t>& c) {
        IcSimulator sim(g, p0);
        for (std::size_t r = begin; r < end; ++r) {
          PhiloxStream rng(seed, r);
          for (NodeId v : sim.run(horizon, rng)) ++c[v];
        }
      });
  return detail::finish_report(runs, seed, horizon, counts);
}

inline McReport lt_mc_marginals(const DirectedGraph& g, const LtParameters& params,
                                const InitialCondition& p0, Horizon horizon, std::size_t runs,
                                std::uint64_t seed, const McOptions& opts = {}) {
  if (runs < 1) throw std::invalid_argument("at least one Monte-Carlo run is required");
  params.validate(g);
  p0.check_matches(g);
  const auto counts = detail::count_runs(
      g.node_count(), runs, opts.threads,
      [&](std::size_t begin, std::size_t end, std::vector<std::uint64_t>& c) {
        LtSimulator sim(g, params, p0);
        for (std::size_t r = begin; r < end; ++r) {
          PhiloxStream rng(seed, r);
          const auto& active = sim.run(horizon, rng);
          for (std::size_t i = 0; i < active.size(); ++i) c[i] += active[i];
        }
      });
  return detail::finish_report(runs, seed, horizon, counts);
}

/// Mean absolute per-node difference between two marginal vectors.
inline double delta_p(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("delta_p: vectors of length " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace dmpinf
