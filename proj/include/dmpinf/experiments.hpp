#pragma once
/*
  Accuracy and runtime-scaling experiments.
*/

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmpinf/graph.hpp"
#include "dmpinf/graph_gen.hpp"
#include "dmpinf/ic_dmp.hpp"
#include "dmpinf/mc_sim.hpp"

namespace dmpinf {

struct BenchRecord {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::size_t horizon = 0;
  double wall_time_seconds = 0.0;
  double sigma = 0.0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::optional<double> slope;  // d log(time) / d log(N); unset for one size
};

struct BenchConfig {
  GenSpec family;                  // nodes is overridden by each ladder entry
  std::vector<std::size_t> ladder;
  std::size_t horizon = 10;
  std::size_t repetitions = 3;
  double seed_fraction = 0.01;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool locality_relabel = true;  // BFS node order before timing
};

struct AccuracyRecord {
  std::string graph_name;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t horizon = 0;
  std::size_t runs = 0;
  double delta_p = 0.0;
  double sigma_dmp = 0.0;
  double sigma_mc = 0.0;
  double dmp_runtime = 0.0;
  double mc_runtime = 0.0;
};

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Least-squares slope of log(y) against log(x).
inline std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("log_log_slope: length mismatch");
  if (x.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

/// Times dmp_est on one generated graph per ladder size. Generation and the
/// optional locality relabelling are not timed; each size gets one untimed
/// warm-up run and reports the median of `repetitions` timed runs.
inline BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.repetitions < 1) throw std::invalid_argument("bench needs at least one repetition");
  for (std::size_t k = 1; k < cfg.ladder.size(); ++k) {
    if (cfg.ladder[k] <= cfg.ladder[k - 1]) throw std::invalid_argument("size ladder must be strictly increasing");
  }
  BenchResult out;
  const DmpOptions opts{cfg.threads};
  for (std::size_t n : cfg.ladder) {
    GenSpec spec = cfg.family;
    spec.nodes = n;
    DirectedGraph g = generate(spec);
    if (cfg.locality_relabel) g = permute_nodes(g, locality_order(g));
    const InitialCondition p0 = random_seed_set(g, seed_count_for_fraction(n, cfg.seed_fraction), cfg.seed);

    BenchRecord rec{n, g.arc_count(), cfg.horizon, 0.0, 0.0};
    rec.sigma = dmp_est(g, p0, cfg.horizon, opts).sigma;
    std::vector<double> times;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const MarginalReport report = dmp_est(g, p0, cfg.horizon, opts);
      times.push_back(seconds_since(start));
      rec.sigma = report.sigma;
    }
    rec.wall_time_seconds = median_of(times);
    out.records.push_back(rec);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : out.records) {
    xs.push_back(static_cast<double>(r.nodes));
    ys.push_back(r.wall_time_seconds);
  }
  out.slope = log_log_slope(xs, ys);
  return out;
}

/// DMP against Monte-Carlo on one instance. Both estimators get one untimed
/// warm-up run and report the median of `repetitions` timed runs.
inline AccuracyRecord run_accuracy(const std::string& name, const DirectedGraph& g, const InitialCondition& p0,
                                   std::size_t horizon, std::size_t runs, std::uint64_t seed,
                                   std::size_t threads = 1, std::size_t repetitions = 3) {
  if (repetitions < 1) throw std::invalid_argument("accuracy needs at least one repetition");
  AccuracyRecord rec;
  rec.graph_name = name;
  rec.nodes = g.node_count();
  rec.edges = g.undirected_edge_count();
  rec.horizon = horizon;
  rec.runs = runs;

  MarginalReport dmp = dmp_est(g, p0, horizon, DmpOptions{threads});
  std::vector<double> times;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    dmp = dmp_est(g, p0, horizon, DmpOptions{threads});
    times.push_back(seconds_since(start));
  }
  rec.dmp_runtime = median_of(times);

  McReport mc = ic_mc_marginals(g, p0, Horizon::finite(horizon), runs, seed, McOptions{threads});
  times.clear();
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    mc = ic_mc_marginals(g, p0, Horizon::finite(horizon), runs, seed, McOptions{threads});
    times.push_back(seconds_since(start));
  }
  rec.mc_runtime = median_of(times);

  rec.delta_p = delta_p(dmp.marginals, mc.estimates);
  rec.sigma_dmp = dmp.sigma;
  rec.sigma_mc = mc.sigma;
  return rec;
}

}  // namespace dmpinf
