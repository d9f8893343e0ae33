#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <string>

#include "dmpinf/io.hpp"
#include "support/run_cli.hpp"

using namespace dmpinf;
using dmpinf::test_support::run_cli;
using nlohmann::json;

namespace {

const std::string kCli = DMPINF_CLI;

const char* kTriangle = "%mode undirected\n0 1 1\n1 2 1\n0 2 1\n";
const char* kPath = "%mode undirected\n0 1 0.5\n1 2 0.5\n";

}  // namespace

TEST(cli, estimate_json_matches_library_example) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kPath);
  const auto i = dir.file("i.txt", "0 1\n");
  const auto r = run_cli(kCli, "estimate --graph " + g + " --init " + i + " --horizon 2");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["horizon"], 2);
  EXPECT_DOUBLE_EQ(j["sigma"].get<double>(), 1.75);
  EXPECT_DOUBLE_EQ(j["marginals"][2].get<double>(), 0.25);
}

TEST(cli, estimate_csv_round_trips_through_node_parser) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kTriangle);
  const auto i = dir.file("i.txt", "0 0.5\n");
  const auto r = run_cli(kCli, "--format csv estimate --graph " + g + " --init " + i + " --horizon 2");
  ASSERT_EQ(r.exit_code, 0);
  const auto graph = parse_graph(kTriangle);
  const auto p = parse_initial_condition(r.out, graph);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
  EXPECT_DOUBLE_EQ(p[2], 0.75);
}

TEST(cli, oracle_csv_round_trips_and_mc_csv_carries_std_errors) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kTriangle);
  const auto i = dir.file("i.txt", "0 0.5\n");
  const auto graph = parse_graph(kTriangle);
  const auto o = run_cli(kCli, "--format csv oracle --graph " + g + " --init " + i + " --horizon 2");
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_DOUBLE_EQ(parse_initial_condition(o.out, graph)[1], 0.5);
  const auto m = run_cli(kCli, "--format csv mc --graph " + g + " --init " + i + " --horizon 2 --runs 100");
  ASSERT_EQ(m.exit_code, 0);
  EXPECT_EQ(m.out.substr(0, m.out.find('\n')), "node,p_mc,std_error");
  EXPECT_EQ(std::count(m.out.begin(), m.out.end(), '\n'), 4);
  EXPECT_EQ(std::count(m.out.begin(), m.out.end(), ','), 2 * 4);
}

TEST(cli, gen_output_parses_and_writes_seed_file) {
  dmpinf::test_support::TempDir dir;
  const auto init = dir.path("init.txt");
  const auto out = dir.path("g.txt");
  const auto r = run_cli(kCli, "--out " + out + " --seed 4 gen --family random_regular --nodes 100 --init-out " +
                                   init + " --seed-fraction 0.05");
  ASSERT_EQ(r.exit_code, 0);
  const auto graph = parse_graph(dmpinf::test_support::slurp(out));
  EXPECT_EQ(graph.node_count(), 100u);
  EXPECT_EQ(graph.arc_count(), 300u);
  EXPECT_EQ(parse_initial_condition(dmpinf::test_support::slurp(init), graph).budget(), 5.0);
}

TEST(cli, input_errors_exit_one) {
  dmpinf::test_support::TempDir dir;
  const auto bad = dir.file("bad.txt", "%mode undirected\n0 0 0.3\n");
  const auto i = dir.file("i.txt", "0 1\n");
  EXPECT_EQ(run_cli(kCli, "estimate --graph " + bad + " --init " + i + " --horizon 2").exit_code, 1);
  EXPECT_EQ(run_cli(kCli, "estimate --graph /nonexistent --init " + i + " --horizon 2").exit_code, 1);
  EXPECT_EQ(run_cli(kCli, "estimate --horizon 2").exit_code, 1);
  EXPECT_EQ(run_cli(kCli, "frobnicate").exit_code, 1);
  const auto g = dir.file("g.txt", kPath);
  const auto far = dir.file("far.txt", "7 0.5\n");
  EXPECT_EQ(run_cli(kCli, "estimate --graph " + g + " --init " + far + " --horizon 2").exit_code, 1);
  EXPECT_EQ(run_cli(kCli, "--format csv oracle --messages --graph " + g + " --init " + i + " --horizon 2").exit_code,
            1);
  EXPECT_EQ(run_cli(kCli, "compare --model lt --inf --graph " + g + " --init " + i).exit_code, 1);
}

TEST(cli, non_converged_fixed_point_is_reported_not_fatal) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kTriangle);
  const auto i = dir.file("i.txt", "0 0.5\n");
  const auto r = run_cli(kCli, "estimate-inf --graph " + g + " --init " + i + " --tolerance 1e-300 --max-sweeps 5");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["converged"].get<bool>());
  EXPECT_EQ(j["sweeps"], 5);
}

TEST(cli, compare_and_bracket_pass_on_valid_input) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kTriangle);
  const auto i = dir.file("i.txt", "0 0.5\n");
  const auto c = run_cli(kCli, "compare --graph " + g + " --init " + i + " --horizon 2 --runs 20000");
  ASSERT_EQ(c.exit_code, 0);
  const auto j = json::parse(c.out);
  EXPECT_LT(j["max_violation"].get<double>(), 0.05);
  const auto b = run_cli(kCli, "bracket --graph " + g + " --init " + i + " --horizon 2 --tree-strategy random");
  ASSERT_EQ(b.exit_code, 0);
  const auto k = json::parse(b.out);
  EXPECT_LE(k["lower"].get<double>(), k["upper"].get<double>());
}

TEST(cli, certify_reports_infinite_girth_for_trees) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kPath);
  const auto r = run_cli(kCli, "certify --graph " + g + " --horizon 9");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["girth"], "inf");
  EXPECT_TRUE(j["exact"].get<bool>());
}

TEST(cli, out_flag_writes_file) {
  dmpinf::test_support::TempDir dir;
  const auto g = dir.file("g.txt", kPath);
  const auto i = dir.file("i.txt", "0 1\n");
  const auto out = dir.path("r.json");
  const auto r = run_cli(kCli, "--out " + out + " estimate --graph " + g + " --init " + i + " --horizon 1");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_DOUBLE_EQ(json::parse(dmpinf::test_support::slurp(out))["sigma"].get<double>(), 1.5);
}
