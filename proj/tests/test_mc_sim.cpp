#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dmpinf/ic_dmp.hpp"
#include "dmpinf/io.hpp"
#include "dmpinf/mc_sim.hpp"
#include "support/oracles.hpp"

using namespace dmpinf;
namespace tst = dmpinf::test_support;

TEST(ic_simulate_once, zero_b_keeps_only_seeds) {
  const auto g = parse_graph("%mode undirected\n0 1 0\n1 2 0\n");
  const InitialCondition p0({1.0, 0.0, 0.0});
  for (std::uint64_t r = 0; r < 50; ++r) {
    PhiloxStream rng(5, r);
    EXPECT_EQ(ic_simulate_once(g, p0, Horizon::infinite(), rng), (std::vector<std::uint8_t>{1, 0, 0}));
  }
}

TEST(ic_simulate_once, unit_b_reaches_everything_past_diameter) {
  tst::Rng trng(1);
  const auto tg = tst::with_weights(trng, 12, tst::random_loopy_edges(trng, 12, 16), tst::BMode::per_arc, 1.0, 1.0);
  const auto g = tst::to_graph(tg);
  std::vector<double> p(12, 0.0);
  p[3] = 1.0;
  const InitialCondition p0(p);
  PhiloxStream rng(1, 0);
  const auto active = ic_simulate_once(g, p0, Horizon::finite(tst::diameter(tg)), rng);
  for (auto a : active) EXPECT_EQ(a, 1);
}

TEST(ic_simulate_once, horizon_truncates_by_distance) {
  const auto g = parse_graph("%mode undirected\n0 1 1\n1 2 1\n2 3 1\n");
  const InitialCondition p0({1.0, 0.0, 0.0, 0.0});
  PhiloxStream rng(1, 0);
  EXPECT_EQ(ic_simulate_once(g, p0, Horizon::finite(2), rng), (std::vector<std::uint8_t>{1, 1, 1, 0}));
}

TEST(ic_mc_marginals, path_half) {
  const auto g = parse_graph("%mode undirected\n0 1 0.5\n");
  const auto r = ic_mc_marginals(g, InitialCondition({1.0, 0.0}), Horizon::finite(1), 100000, 17);
  EXPECT_NEAR(r.estimates[1], 0.5, 0.005);
  EXPECT_EQ(r.estimates[0], 1.0);
}

TEST(ic_mc_marginals, single_run_is_indicator) {
  tst::Rng trng(2);
  const auto g = tst::to_graph(tst::with_weights(trng, 8, tst::random_loopy_edges(trng, 8, 12), tst::BMode::per_arc));
  const auto r = ic_mc_marginals(g, InitialCondition(tst::random_p0(trng, 8)), Horizon::finite(3), 1, 4);
  for (double x : r.estimates) EXPECT_TRUE(x == 0.0 || x == 1.0);
}

TEST(ic_mc_marginals, horizon_zero_estimates_p0) {
  const auto g = parse_graph("%mode undirected\n0 1 0.9\n1 2 0.9\n");
  const std::vector<double> p{0.2, 0.7, 0.0};
  const std::size_t runs = 100000;
  const auto r = ic_mc_marginals(g, InitialCondition(p), Horizon::finite(0), runs, 8);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(r.estimates[i], p[i], 4 * std::sqrt(p[i] * (1 - p[i]) / runs) + 1e-12);
  }
}

TEST(ic_mc_marginals, reproducible_and_thread_invariant) {
  tst::Rng trng(3);
  const auto g =
      tst::to_graph(tst::with_weights(trng, 200, tst::random_loopy_edges(trng, 200, 400), tst::BMode::per_arc));
  const InitialCondition p0(tst::mixed_p0(trng, 200));
  const auto a = ic_mc_marginals(g, p0, Horizon::finite(5), 3001, 99, {1});
  const auto b = ic_mc_marginals(g, p0, Horizon::finite(5), 3001, 99, {1});
  const auto c = ic_mc_marginals(g, p0, Horizon::finite(5), 3001, 99, {4});
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.estimates, c.estimates);
  EXPECT_EQ(a.std_errors, c.std_errors);
  EXPECT_EQ(a.sigma, c.sigma);
  const auto d = ic_mc_marginals(g, p0, Horizon::finite(5), 3001, 100, {1});
  EXPECT_NE(a.estimates, d.estimates);
}

TEST(ic_mc_marginals, std_error_bernoulli_bound) {
  tst::Rng trng(4);
  const auto g = tst::to_graph(tst::with_weights(trng, 30, tst::random_loopy_edges(trng, 30, 45), tst::BMode::per_arc));
  const std::size_t runs = 777;
  const auto r = ic_mc_marginals(g, InitialCondition(tst::random_p0(trng, 30)), Horizon::infinite(), runs, 1);
  for (double se : r.std_errors) EXPECT_LE(se, 0.5 / std::sqrt(static_cast<double>(runs)) + 1e-15);
  EXPECT_THROW(ic_mc_marginals(g, InitialCondition(tst::random_p0(trng, 30)), Horizon::infinite(), 0, 1),
               std::invalid_argument);
}

TEST(ic_mc_marginals, agrees_with_brute_oracle) {
  tst::Rng trng(5);
  const std::size_t runs = 100000;
  std::size_t total = 0;
  std::size_t within = 0;
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t n = tst::pick(trng, 3, 7);
    const auto tg = tst::with_weights(trng, n, tst::random_loopy_edges(trng, n, n + 1), tst::BMode::per_arc);
    const auto p = tst::mixed_p0(trng, n);
    const std::size_t T = tst::pick(trng, 1, 4);
    const auto mc = ic_mc_marginals(tst::to_graph(tg), InitialCondition(p), Horizon::finite(T), runs, 50 + rep);
    const auto exact = tst::brute_ic_marginals(tg, p, T);
    for (std::size_t i = 0; i < n; ++i) {
      ++total;
      const double se = std::sqrt(std::max(0.0, exact[i] * (1 - exact[i])) / runs);
      if (std::abs(mc.estimates[i] - exact[i]) <= 4 * se + 1e-12) ++within;
    }
  }
  EXPECT_GE(static_cast<double>(within), 0.99 * static_cast<double>(total));
}

TEST(ic_mc_marginals, dmp_dominates_on_loopy_graphs) {
  tst::Rng trng(6);
  const std::size_t runs = 20000;
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 40;
    const auto g = tst::to_graph(
        tst::with_weights(trng, n, tst::random_loopy_edges(trng, n, 70), tst::BMode::symmetric, 0.0, 0.6));
    const InitialCondition p0(tst::mixed_p0(trng, n));
    const auto mc = ic_mc_marginals(g, p0, Horizon::finite(6), runs, rep);
    const auto dmp = dmp_est(g, p0, 6);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(dmp.marginals[i], mc.estimates[i] - 4 * mc.std_errors[i] - 1e-12);
    }
  }
}

TEST(delta_p, examples) {
  const std::vector<double> a{0.1, 0.2, 0.3};
  EXPECT_EQ(delta_p(a, a), 0.0);
  EXPECT_DOUBLE_EQ(delta_p(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(delta_p(std::vector<double>{0.5, 0.5}, std::vector<double>{0.4, 0.8}), 0.2);
  EXPECT_THROW(delta_p(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(lt_simulate_once, unreachable_threshold_never_activates) {
  const auto g = parse_graph("%mode undirected\n0 1 0.4\n");
  const LtParameters params{{0.5, 0.9}, {1.0, 1.0}};
  const InitialCondition p0({1.0, 0.0});
  for (std::uint64_t r = 0; r < 20; ++r) {
    PhiloxStream rng(1, r);
    EXPECT_EQ(lt_simulate_once(g, params, p0, Horizon::infinite(), rng)[1], 0);
  }
}
