#include <gtest/gtest.h>

#include <vector>

#include "dmpinf/exact_oracle.hpp"
#include "dmpinf/ic_dmp.hpp"
#include "dmpinf/io.hpp"
#include "support/oracles.hpp"

using namespace dmpinf;
namespace tst = dmpinf::test_support;

namespace {

const tst::TestGraph kTriangle{3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {0, 2, 1}, {2, 0, 1}}};

}  // namespace

TEST(exact_marginals, path_example) {
  const auto g = parse_graph("%mode undirected\n0 1 0.5\n1 2 0.5\n");
  const auto r = exact_marginals(g, InitialCondition({1.0, 0.0, 0.0}), Horizon::finite(2));
  EXPECT_DOUBLE_EQ(r.marginals[0], 1.0);
  EXPECT_DOUBLE_EQ(r.marginals[1], 0.5);
  EXPECT_DOUBLE_EQ(r.marginals[2], 0.25);
}

TEST(exact_marginals, triangle_example) {
  const auto r = exact_marginals(tst::to_graph(kTriangle), InitialCondition({0.5, 0.0, 0.0}), Horizon::finite(2));
  for (double m : r.marginals) EXPECT_DOUBLE_EQ(m, 0.5);
}

TEST(exact_marginals, horizon_zero_is_p0) {
  tst::Rng rng(1);
  const auto g = tst::to_graph(tst::with_weights(rng, 6, tst::random_loopy_edges(rng, 6, 8), tst::BMode::per_arc));
  const auto p = tst::random_p0(rng, 6);
  const auto r = exact_marginals(g, InitialCondition(p), Horizon::finite(0));
  EXPECT_LT(tst::max_abs_diff(r.marginals, p), 1e-15);
}

TEST(exact_marginals, agrees_with_test_enumeration) {
  tst::Rng rng(2);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = tst::pick(rng, 3, 7);
    const bool sym = rep % 2 == 0;
    const auto tg = tst::with_weights(rng, n, tst::random_loopy_edges(rng, n, tst::pick(rng, n, n + 2)),
                                      sym ? tst::BMode::symmetric : tst::BMode::per_arc);
    const auto p = tst::mixed_p0(rng, n);
    const std::size_t T = tst::pick(rng, 0, 5);
    const Horizon h = rep % 5 == 0 ? Horizon::infinite() : Horizon::finite(T);
    const auto r = exact_marginals(tst::to_graph(tg), InitialCondition(p), h);
    const auto expect = tst::brute_ic_marginals(tg, p, h.is_infinite() ? tst::kFar : T);
    EXPECT_LT(tst::max_abs_diff(r.marginals, expect), 1e-12) << "rep " << rep;
  }
}

TEST(exact_marginals, per_edge_coupling_equals_per_arc) {
  tst::Rng rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = tst::pick(rng, 3, 5);
    const auto tg = tst::with_weights(rng, n, tst::random_loopy_edges(rng, n, tst::pick(rng, n, 4)),
                                      tst::BMode::symmetric);
    const auto g = tst::to_graph(tg);
    const InitialCondition p0(tst::mixed_p0(rng, n));
    const Horizon h = Horizon::finite(tst::pick(rng, 1, 4));
    const auto arc = exact_marginals(g, p0, h, {LivenessCoupling::per_arc, 20});
    const auto edge = exact_marginals(g, p0, h, {LivenessCoupling::per_edge, 20});
    EXPECT_LT(tst::max_abs_diff(arc.marginals, edge.marginals), 1e-12);
    const auto brute = tst::brute_ic_marginals(tg, std::vector<double>(p0.values().begin(), p0.values().end()),
                                               h.steps(), true);
    EXPECT_LT(tst::max_abs_diff(edge.marginals, brute), 1e-12);
  }
}

TEST(exact_marginals, per_edge_coupling_needs_symmetric_b) {
  const auto g = parse_graph("%mode undirected\n0 1 0.2 0.3\n");
  EXPECT_THROW(exact_marginals(g, InitialCondition({1.0, 0.0}), Horizon::finite(1), {LivenessCoupling::per_edge, 20}),
               std::invalid_argument);
}

TEST(exact_marginals, cap_counts_random_indicators) {
  tst::Rng rng(4);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> k6;
  for (std::uint32_t u = 0; u < 6; ++u) {
    for (std::uint32_t v = u + 1; v < 6; ++v) k6.emplace_back(u, v);
  }
  const auto g = tst::to_graph(tst::with_weights(rng, 6, k6, tst::BMode::symmetric, 0.1, 0.9));
  const InitialCondition p0(tst::mixed_p0(rng, 6));
  // 25 arcs feed each node, but only 15 edges
  EXPECT_THROW(exact_marginals(g, p0, Horizon::infinite(), {LivenessCoupling::per_arc, 20}), OracleCapExceeded);
  EXPECT_NO_THROW(exact_marginals(g, p0, Horizon::infinite(), {LivenessCoupling::per_edge, 20}));
  // arcs with b in {0, 1} are not random and do not count
  const auto det = tst::with_weights(rng, 8, tst::random_loopy_edges(rng, 8, 14), tst::BMode::per_arc, 1.0, 1.0);
  EXPECT_NO_THROW(exact_marginals(tst::to_graph(det), InitialCondition(tst::mixed_p0(rng, 8)), Horizon::finite(2),
                                  {LivenessCoupling::per_arc, 0}));
}

TEST(exact_marginals, short_horizon_counts_only_nearby_indicators) {
  tst::Rng rng(6);
  const auto g = tst::to_graph(tst::with_weights(rng, 30, tst::cycle_edges(30), tst::BMode::per_arc, 0.1, 0.9));
  const InitialCondition p0(tst::random_p0(rng, 30));
  // horizon 3 on a cycle: three arcs from each side
  EXPECT_NO_THROW(exact_marginals(g, p0, Horizon::finite(3), {LivenessCoupling::per_arc, 6}));
  EXPECT_THROW(exact_marginals(g, p0, Horizon::finite(3), {LivenessCoupling::per_arc, 5}), OracleCapExceeded);
}

TEST(exact_marginals, large_per_arc_trees_match_path_enumeration) {
  tst::Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = tst::pick(rng, 10, 12);
    const auto tg = tst::with_weights(rng, n, tst::random_tree_edges(rng, n), tst::BMode::per_arc);
    const auto p = tst::random_p0(rng, n);
    const std::size_t T = tst::pick(rng, 0, 6);
    const auto r = exact_marginals(tst::to_graph(tg), InitialCondition(p), Horizon::finite(T));
    EXPECT_LT(tst::max_abs_diff(r.marginals, tst::brute_tree_marginals(tg, p, T)), 1e-12) << "rep " << rep;
  }
}

TEST(exact_marginals, monotone_in_horizon_and_seeds) {
  tst::Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = tst::pick(rng, 3, 6);
    const auto g = tst::to_graph(
        tst::with_weights(rng, n, tst::random_loopy_edges(rng, n, n + 1), tst::BMode::symmetric));
    auto p = tst::random_p0(rng, n);
    std::vector<double> prev(n, 0.0);
    for (std::size_t T = 0; T <= 5; ++T) {
      const auto r = exact_marginals(g, InitialCondition(p), Horizon::finite(T));
      for (std::size_t i = 0; i < n; ++i) EXPECT_GE(r.marginals[i], prev[i] - 1e-15);
      prev = r.marginals;
    }
    const auto before = exact_marginals(g, InitialCondition(p), Horizon::finite(3));
    p[tst::pick(rng, 0, n - 1)] = 1.0;
    const auto after = exact_marginals(g, InitialCondition(p), Horizon::finite(3));
    for (std::size_t i = 0; i < n; ++i) EXPECT_GE(after.marginals[i], before.marginals[i] - 1e-15);
  }
}

TEST(exact_cavity_messages, examples) {
  const auto path = parse_graph("%mode undirected\n0 1 0.5\n");
  for (std::size_t T : {0u, 1u, 4u}) {
    const auto m = exact_cavity_messages(path, InitialCondition({1.0, 0.0}), Horizon::finite(T));
    EXPECT_EQ(m[path.find_arc(0, 1)], 1.0);
    EXPECT_EQ(m[path.find_arc(1, 0)], 0.0);
  }
  const auto tri = tst::to_graph(kTriangle);
  const auto m = exact_cavity_messages(tri, InitialCondition({0.5, 0.0, 0.0}), Horizon::finite(2));
  EXPECT_DOUBLE_EQ(m[tri.find_arc(2, 1)], 0.5);
}

TEST(exact_cavity_messages, agree_with_test_enumeration) {
  tst::Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = tst::pick(rng, 3, 6);
    const auto tg = tst::with_weights(rng, n, tst::random_loopy_edges(rng, n, n + 1), tst::BMode::per_arc);
    const auto g = tst::to_graph(tg);
    const auto p = tst::mixed_p0(rng, n);
    const std::size_t T = tst::pick(rng, 0, 4);
    const auto lib = exact_cavity_messages(g, InitialCondition(p), Horizon::finite(T));
    const auto brute = tst::brute_cavity_messages(tg, p, T);
    for (std::size_t k = 0; k < tg.arcs.size(); ++k) {
      EXPECT_NEAR(lib[g.find_arc(tg.arcs[k].u, tg.arcs[k].v)], brute[k], 1e-12);
    }
  }
}

TEST(exact_cavity_messages, dmp_messages_dominate) {
  tst::Rng rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = tst::pick(rng, 3, 6);
    const auto tg = tst::with_weights(rng, n, tst::random_loopy_edges(rng, n, n + 1), tst::BMode::per_arc);
    const auto g = tst::to_graph(tg);
    const InitialCondition p0(tst::mixed_p0(rng, n));
    const std::size_t T = tst::pick(rng, 0, 5);
    const auto exact = exact_cavity_messages(g, p0, Horizon::finite(T));
    const auto dmp = dmp_messages(g, p0, T);
    for (ArcId e = 0; e < g.arc_count(); ++e) EXPECT_GE(dmp.messages[e], exact[e] - 1e-10);
  }
}

TEST(exact_marginals, tree_identity_with_dmp) {
  tst::Rng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = tst::pick(rng, 2, 10);
    const auto g = tst::to_graph(tst::with_weights(rng, n, tst::random_tree_edges(rng, n), tst::BMode::per_arc));
    const InitialCondition p0(tst::random_p0(rng, n));
    const std::size_t T = tst::pick(rng, 0, 6);
    EXPECT_LT(tst::max_abs_diff(exact_marginals(g, p0, Horizon::finite(T)).marginals, dmp_est(g, p0, T).marginals),
              1e-10);
  }
}
