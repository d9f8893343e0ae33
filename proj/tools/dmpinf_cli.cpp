// dmpinf: command-line front end for the influence estimators.
//
// Exit codes: 0 success, 1 input error, 2 invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmpinf/dmpinf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace dmpinf;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr double kViolationSlack = 1e-12;
constexpr double kBracketSlack = 1e-10;

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string out = "-";
  std::string format = "json";
  std::size_t threads = 1;
  std::uint64_t seed = kDefaultSeed;
};

struct GraphFlags {
  std::string path;
  std::string mode;  // empty: take it from the file header

  void add_to(CLI::App* sub) {
    sub->add_option("--graph", path, "Graph file")->required()->check(CLI::ExistingFile);
    sub->add_option("--mode", mode, "Override the graph file mode")
        ->check(CLI::IsMember({"directed", "undirected"}));
  }

  DirectedGraph load() const {
    std::optional<GraphMode> override;
    if (mode == "directed") override = GraphMode::directed;
    if (mode == "undirected") override = GraphMode::undirected;
    const std::string text = read_text_file(path);
    try {
      return parse_graph(text, override);
    } catch (const ParseError& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
  }
};

struct HorizonFlags {
  std::optional<std::size_t> steps;
  bool infinite = false;

  void add_to(CLI::App* sub, bool allow_infinite) {
    auto* h = sub->add_option("--horizon", steps, "Number of time steps T");
    if (allow_infinite) {
      auto* i = sub->add_flag("--inf", infinite, "Large-time limit");
      h->excludes(i);
    }
  }

  Horizon get() const {
    if (infinite) return Horizon::infinite();
    if (!steps) throw std::invalid_argument("one of --horizon or --inf is required");
    return Horizon::finite(*steps);
  }
};

struct LtFlags {
  std::string theta_file;
  std::string eta_file;

  void add_to(CLI::App* sub) {
    sub->add_option("--theta-file", theta_file, "Per-node thresholds (default 0.5)")->check(CLI::ExistingFile);
    sub->add_option("--eta-file", eta_file, "Per-node activation probabilities (default 1)")
        ->check(CLI::ExistingFile);
  }

  LtParameters load(const DirectedGraph& g) const {
    LtParameters p = LtParameters::uniform(g.node_count());
    if (!theta_file.empty()) p.theta = parse_node_values(read_text_file(theta_file), g, 0.5);
    if (!eta_file.empty()) p.eta = parse_node_values(read_text_file(eta_file), g, 1.0);
    p.validate(g);
    return p;
  }
};

InitialCondition load_init(const std::string& path, const DirectedGraph& g) {
  try {
    return parse_initial_condition(read_text_file(path), g);
  } catch (const ParseError& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

/// Families and weight distributions shared by gen, bench and accuracy.
struct FamilyFlags {
  std::string family = "random_regular";
  std::size_t degree = 3;
  double edge_prob = 0.0;
  std::string b = "uniform:0:0.1";
  bool symmetric = true;
  std::size_t max_restarts = 1000;

  void add_to(CLI::App* sub) {
    sub->add_option("--family", family, "random_regular|erdos_renyi|random_tree|cycle|path|star")
        ->capture_default_str();
    sub->add_option("--degree", degree, "Degree for random_regular")->capture_default_str();
    sub->add_option("--edge-prob", edge_prob, "Edge probability for erdos_renyi");
    sub->add_option("--b", b, "const:<c> or uniform:<lo>:<hi>")->capture_default_str();
    sub->add_flag("--symmetric,!--asymmetric", symmetric, "One b per edge (default) or one per arc");
    sub->add_option("--max-restarts", max_restarts, "Pairing-model restart limit")->capture_default_str();
  }

  GenSpec spec(std::size_t nodes, std::uint64_t seed) const {
    GenSpec s;
    s.family = parse_family(family);
    s.nodes = nodes;
    s.degree = degree;
    s.edge_prob = edge_prob;
    s.b = BDistribution::parse(b, symmetric);
    s.seed = seed;
    s.max_restarts = max_restarts;
    return s;
  }
};

json horizon_json(Horizon h) {
  if (h.is_infinite()) return "inf";
  return h.steps();
}

std::string node_name(const DirectedGraph& g, NodeId i) {
  return g.has_labels() ? g.labels()[i] : std::to_string(i);
}

json values_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

void add_labels(json& doc, const DirectedGraph& g) {
  if (g.has_labels()) doc["labels"] = g.labels();
}

std::string node_csv(const DirectedGraph& g, const std::string& column, std::span<const double> values) {
  std::string out = "node," + column + "\n";
  for (NodeId i = 0; i < values.size(); ++i) out += node_name(g, i) + "," + detail::format_real(values[i]) + "\n";
  return out;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return detail::format_real(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// One header line plus one row per record, columns in key order.
std::string records_csv(const std::vector<json>& records) {
  if (records.empty()) return "";
  std::string out;
  bool first = true;
  for (const auto& [key, value] : records.front().items()) {
    out += (first ? "" : ",") + key;
    first = false;
  }
  out += "\n";
  for (const json& r : records) {
    first = true;
    for (const auto& [key, value] : r.items()) {
      out += (first ? "" : ",") + csv_cell(value);
      first = false;
    }
    out += "\n";
  }
  return out;
}

void emit(const GlobalFlags& flags, const std::string& text) {
  if (flags.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(flags.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::invalid_argument("cannot open output file '" + flags.out + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + flags.out + "'");
}

void emit_json(const GlobalFlags& flags, const json& doc) { emit(flags, doc.dump(2) + "\n"); }

bool csv(const GlobalFlags& flags) { return flags.format == "csv"; }

void check_report(const MarginalReport& r, const InitialCondition& p0) {
  try {
    validate_report(r, p0);
  } catch (const std::logic_error& e) {
    throw InvariantViolation(e.what());
  }
}

// ---------------------------------------------------------------- commands

struct GenCommand {
  FamilyFlags family;
  std::size_t nodes = 0;
  std::string init_out;
  std::optional<std::size_t> seed_count;
  std::optional<double> seed_fraction;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("gen", "Generate a synthetic graph");
    family.add_to(sub);
    sub->add_option("--nodes", nodes, "Number of nodes")->required();
    sub->add_option("--init-out", init_out, "Also write a random sure-seed initial condition here");
    auto* c = sub->add_option("--seed-count", seed_count, "Number of seeds for --init-out");
    auto* f = sub->add_option("--seed-fraction", seed_fraction, "Seed fraction for --init-out");
    c->excludes(f);
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = generate(family.spec(nodes, flags.seed));
    if (!init_out.empty()) {
      const std::size_t count = seed_count ? *seed_count : seed_count_for_fraction(nodes, seed_fraction.value_or(0.01));
      const InitialCondition p0 = random_seed_set(g, count, flags.seed);
      std::string text;
      for (NodeId i = 0; i < g.node_count(); ++i) {
        if (p0[i] > 0.0) text += std::to_string(i) + " " + detail::format_real(p0[i]) + "\n";
      }
      std::ofstream out(init_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::invalid_argument("cannot open '" + init_out + "'");
      out << text;
    } else if (seed_count || seed_fraction) {
      throw std::invalid_argument("--seed-count/--seed-fraction need --init-out");
    }
    emit(flags, serialize_graph(g));
    return 0;
  }
};

struct EstimateCommand {
  GraphFlags graph;
  std::string init;
  std::size_t horizon = 0;
  bool trajectory = false;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("estimate", "Finite-horizon IC message passing");
    graph.add_to(sub);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
    sub->add_option("--horizon", horizon, "Number of time steps T")->required();
    sub->add_flag("--trajectory", trajectory, "Also report marginals for every t <= T");
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    const DmpOptions opts{flags.threads};
    const auto reports = trajectory ? dmp_trajectory(g, p0, horizon, opts)
                                    : std::vector<MarginalReport>{dmp_est(g, p0, horizon, opts)};
    for (const auto& r : reports) check_report(r, p0);
    const MarginalReport& final_report = reports.back();

    if (csv(flags)) {
      if (!trajectory) {
        emit(flags, node_csv(g, "p_hat", final_report.marginals));
        return 0;
      }
      std::string out = "t,node,p_hat\n";
      for (std::size_t t = 0; t < reports.size(); ++t) {
        for (NodeId i = 0; i < g.node_count(); ++i) {
          out += std::to_string(t) + "," + node_name(g, i) + "," + detail::format_real(reports[t].marginals[i]) + "\n";
        }
      }
      emit(flags, out);
      return 0;
    }
    json doc;
    doc["horizon"] = horizon_json(final_report.horizon);
    doc["sigma"] = final_report.sigma;
    doc["marginals"] = values_json(final_report.marginals);
    add_labels(doc, g);
    if (trajectory) {
      json traj = json::array();
      for (const auto& r : reports) {
        traj.push_back({{"horizon", horizon_json(r.horizon)}, {"sigma", r.sigma}, {"marginals", values_json(r.marginals)}});
      }
      doc["trajectory"] = std::move(traj);
    }
    emit_json(flags, doc);
    return 0;
  }
};

struct EstimateInfCommand {
  GraphFlags graph;
  std::string init;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_sweeps;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("estimate-inf", "Large-time IC message-passing fixed point");
    graph.add_to(sub);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
    sub->add_option("--tolerance", tolerance, "L1 residual threshold (default 1e-9 per arc)");
    sub->add_option("--max-sweeps", max_sweeps, "Sweep limit (default 20 N, at most 1e6)");
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    FixedPointConfig cfg = FixedPointConfig::defaults_for(g);
    if (tolerance) cfg.tolerance = *tolerance;
    if (max_sweeps) cfg.max_sweeps = *max_sweeps;
    const FixedPointReport fp = dmp_inf(g, p0, cfg, DmpOptions{flags.threads});
    check_report(fp.report, p0);
    if (!fp.converged) {
      std::cerr << "warning: no convergence after " << fp.sweeps << " sweeps (residual "
                << detail::format_real(fp.residual) << ")\n";
    }
    if (csv(flags)) {
      emit(flags, node_csv(g, "p_hat", fp.report.marginals));
      return 0;
    }
    json doc;
    doc["horizon"] = "inf";
    doc["sigma"] = fp.report.sigma;
    doc["converged"] = fp.converged;
    doc["sweeps"] = fp.sweeps;
    doc["residual"] = fp.residual;
    doc["marginals"] = values_json(fp.report.marginals);
    add_labels(doc, g);
    emit_json(flags, doc);
    return 0;
  }
};

struct LtEstimateCommand {
  GraphFlags graph;
  LtFlags lt;
  std::string init;
  std::size_t horizon = 0;
  std::size_t degree_cap = kDefaultLtDegreeCap;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("lt-estimate", "Finite-horizon stochastic LT message passing");
    graph.add_to(sub);
    lt.add_to(sub);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
    sub->add_option("--horizon", horizon, "Number of time steps T")->required();
    sub->add_option("--degree-cap", degree_cap, "Largest in-degree enumerated exactly")->capture_default_str();
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    const LtParameters params = lt.load(g);
    const MarginalReport r = lt_estimate(g, params, p0, horizon, LtOptions{degree_cap, flags.threads});
    check_report(r, p0);
    if (csv(flags)) {
      emit(flags, node_csv(g, "p_hat", r.marginals));
      return 0;
    }
    json doc;
    doc["horizon"] = horizon_json(r.horizon);
    doc["sigma"] = r.sigma;
    doc["marginals"] = values_json(r.marginals);
    add_labels(doc, g);
    emit_json(flags, doc);
    return 0;
  }
};

struct McFlags {
  std::size_t runs = 10000;
  std::string model = "ic";

  void add_to(CLI::App* sub) {
    sub->add_option("--runs", runs, "Number of Monte-Carlo runs")->capture_default_str();
    sub->add_option("--model", model, "ic or lt")->check(CLI::IsMember({"ic", "lt"}))->capture_default_str();
  }
};

McReport run_mc(const McFlags& mc, const LtFlags& lt, const DirectedGraph& g, const InitialCondition& p0,
                Horizon h, const GlobalFlags& flags) {
  const McOptions opts{flags.threads};
  if (mc.model == "lt") return lt_mc_marginals(g, lt.load(g), p0, h, mc.runs, flags.seed, opts);
  return ic_mc_marginals(g, p0, h, mc.runs, flags.seed, opts);
}

struct McCommand {
  GraphFlags graph;
  LtFlags lt;
  McFlags mc;
  HorizonFlags horizon;
  std::string init;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("mc", "Monte-Carlo marginals");
    graph.add_to(sub);
    lt.add_to(sub);
    mc.add_to(sub);
    horizon.add_to(sub, true);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    const McReport r = run_mc(mc, lt, g, p0, horizon.get(), flags);
    if (csv(flags)) {
      std::string out = "node,p_mc,std_error\n";
      for (NodeId i = 0; i < r.estimates.size(); ++i) {
        out += node_name(g, i) + "," + detail::format_real(r.estimates[i]) + "," +
               detail::format_real(r.std_errors[i]) + "\n";
      }
      emit(flags, out);
      return 0;
    }
    json doc;
    doc["model"] = mc.model;
    doc["horizon"] = horizon_json(r.horizon);
    doc["runs"] = r.runs;
    doc["seed"] = r.seed;
    doc["sigma_mc"] = r.sigma;
    doc["marginals"] = values_json(r.estimates);
    doc["std_errors"] = values_json(r.std_errors);
    add_labels(doc, g);
    emit_json(flags, doc);
    return 0;
  }
};

struct OracleCommand {
  GraphFlags graph;
  HorizonFlags horizon;
  std::string init;
  bool messages = false;
  std::string coupling = "auto";
  std::size_t cap = kDefaultOracleCap;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("oracle", "Exact IC marginals by live-edge enumeration");
    graph.add_to(sub);
    horizon.add_to(sub, true);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--messages", messages, "Also report exact cavity probabilities per arc");
    sub->add_option("--coupling", coupling, "Liveness indicators: auto, arc or edge")
        ->check(CLI::IsMember({"auto", "arc", "edge"}))
        ->capture_default_str();
    sub->add_option("--cap", cap, "Largest number of random indicators enumerated")->capture_default_str();
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    OracleOptions opts;
    opts.cap = cap;
    if (coupling == "arc") opts.coupling = LivenessCoupling::per_arc;
    if (coupling == "edge") opts.coupling = LivenessCoupling::per_edge;
    const Horizon h = horizon.get();
    const MarginalReport r = exact_marginals(g, p0, h, opts);
    check_report(r, p0);
    if (csv(flags)) {
      if (messages) throw std::invalid_argument("--messages needs --format json");
      emit(flags, node_csv(g, "p_exact", r.marginals));
      return 0;
    }
    json doc;
    doc["horizon"] = horizon_json(h);
    doc["sigma"] = r.sigma;
    doc["marginals"] = values_json(r.marginals);
    add_labels(doc, g);
    if (messages) {
      const auto cavity = exact_cavity_messages(g, p0, h, opts);
      json arcs = json::array();
      for (ArcId e = 0; e < g.arc_count(); ++e) {
        arcs.push_back({{"source", node_name(g, g.source(e))}, {"target", node_name(g, g.target(e))}, {"p", cavity[e]}});
      }
      doc["messages"] = std::move(arcs);
    }
    emit_json(flags, doc);
    return 0;
  }
};

struct CompareCommand {
  GraphFlags graph;
  LtFlags lt;
  McFlags mc;
  HorizonFlags horizon;
  std::string init;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("compare", "Message passing against Monte-Carlo");
    graph.add_to(sub);
    lt.add_to(sub);
    mc.add_to(sub);
    horizon.add_to(sub, true);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    const Horizon h = horizon.get();
    MarginalReport dmp;
    if (mc.model == "lt") {
      if (h.is_infinite()) throw std::invalid_argument("the LT estimator needs a finite --horizon");
      dmp = lt_estimate(g, lt.load(g), p0, h.steps(), LtOptions{kDefaultLtDegreeCap, flags.threads});
    } else if (h.is_infinite()) {
      dmp = dmp_inf(g, p0, FixedPointConfig::defaults_for(g), DmpOptions{flags.threads}).report;
    } else {
      dmp = dmp_est(g, p0, h.steps(), DmpOptions{flags.threads});
    }
    check_report(dmp, p0);
    const McReport r = run_mc(mc, lt, g, p0, h, flags);

    double max_violation = 0.0;
    std::optional<NodeId> worst;
    std::optional<NodeId> flagged;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const double v = r.estimates[i] - dmp.marginals[i];
      if (!worst || v > max_violation) {
        max_violation = v;
        worst = i;
      }
      if (v > 4.0 * r.std_errors[i] + kViolationSlack && !flagged) flagged = i;
    }

    json doc;
    doc["model"] = mc.model;
    doc["horizon"] = horizon_json(h);
    doc["runs"] = r.runs;
    doc["seed"] = r.seed;
    doc["delta_p"] = delta_p(dmp.marginals, r.estimates);
    doc["sigma_dmp"] = dmp.sigma;
    doc["sigma_mc"] = r.sigma;
    doc["max_violation"] = max_violation;
    if (csv(flags)) {
      emit(flags, records_csv({doc}));
    } else {
      emit_json(flags, doc);
    }
    // Message passing bounds IC marginals from above; LT has no such bound.
    if (mc.model == "ic" && flagged) {
      std::cerr << "invariant violation: node " << node_name(g, *flagged)
                << " Monte-Carlo estimate exceeds the message-passing bound by more than 4 standard errors\n";
      return 2;
    }
    return 0;
  }
};

struct CertifyCommand {
  GraphFlags graph;
  HorizonFlags horizon;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("certify", "Girth-based exactness certificate");
    graph.add_to(sub);
    horizon.add_to(sub, true);
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const ExactnessCertificate c = exactness_certificate(g, horizon.get());
    json doc;
    doc["girth"] = c.girth ? json(*c.girth) : json("inf");
    doc["horizon"] = horizon_json(c.horizon);
    doc["exact"] = c.exact;
    if (csv(flags)) {
      emit(flags, records_csv({doc}));
    } else {
      emit_json(flags, doc);
    }
    return 0;
  }
};

struct BracketCommand {
  GraphFlags graph;
  HorizonFlags horizon;
  std::string init;
  std::string strategy = "bfs";
  std::optional<std::uint64_t> tree_seed;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("bracket", "Spanning-tree lower bound and full-graph upper value");
    graph.add_to(sub);
    horizon.add_to(sub, true);
    sub->add_option("--init", init, "Initial condition file")->required()->check(CLI::ExistingFile);
    sub->add_option("--tree-strategy", strategy, "bfs or random")
        ->check(CLI::IsMember({"bfs", "random"}))
        ->capture_default_str();
    sub->add_option("--tree-seed", tree_seed, "Seed for the random strategy (default: --seed)");
  }

  int run(const GlobalFlags& flags) const {
    const DirectedGraph g = graph.load();
    const InitialCondition p0 = load_init(init, g);
    const TreeStrategy s = strategy == "random" ? TreeStrategy::random : TreeStrategy::bfs;
    const std::uint64_t seed = tree_seed.value_or(flags.seed);
    const BoundBracket br = spanning_tree_lower_bound(g, p0, horizon.get(), s, seed, DmpOptions{flags.threads});
    json doc;
    doc["horizon"] = horizon_json(br.horizon);
    doc["strategy"] = strategy;
    doc["tree_seed"] = seed;
    doc["tree_edges"] = br.tree_edges;
    doc["lower"] = br.lower;
    doc["upper"] = br.upper;
    if (csv(flags)) {
      emit(flags, records_csv({doc}));
    } else {
      emit_json(flags, doc);
    }
    if (br.lower > br.upper + kBracketSlack) {
      std::cerr << "invariant violation: tree estimate exceeds the full-graph estimate\n";
      return 2;
    }
    return 0;
  }
};

struct BenchCommand {
  FamilyFlags family;
  std::vector<std::size_t> sizes{10000, 30000, 100000, 300000, 1000000};
  std::size_t horizon = 10;
  std::size_t repetitions = 3;
  double seed_fraction = 0.01;
  bool relabel = true;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("bench", "Runtime scaling of the finite-horizon estimator");
    family.add_to(sub);
    sub->add_option("--sizes", sizes, "Strictly increasing node counts")->delimiter(',')->capture_default_str();
    sub->add_option("--horizon", horizon, "Number of time steps T")->capture_default_str();
    sub->add_option("--repetitions", repetitions, "Timed runs per size (median reported)")->capture_default_str();
    sub->add_option("--seed-fraction", seed_fraction, "Fraction of sure seeds")->capture_default_str();
    sub->add_flag("--relabel,!--no-relabel", relabel, "Breadth-first node order before timing (default on)");
  }

  int run(const GlobalFlags& flags) const {
    BenchConfig cfg;
    cfg.family = family.spec(0, flags.seed);
    cfg.ladder = sizes;
    cfg.horizon = horizon;
    cfg.repetitions = repetitions;
    cfg.seed_fraction = seed_fraction;
    cfg.seed = flags.seed;
    cfg.threads = flags.threads;
    cfg.locality_relabel = relabel;
    const BenchResult result = run_bench(cfg);

    std::vector<json> records;
    for (const auto& r : result.records) {
      records.push_back({{"nodes", r.nodes},
                         {"arcs", r.arcs},
                         {"horizon", r.horizon},
                         {"wall_time_seconds", r.wall_time_seconds},
                         {"sigma", r.sigma}});
    }
    if (csv(flags)) {
      emit(flags, records_csv(records));
      return 0;
    }
    json doc;
    doc["family"] = family_name(cfg.family.family);
    doc["horizon"] = horizon;
    doc["repetitions"] = repetitions;
    doc["seed"] = flags.seed;
    doc["threads"] = flags.threads;
    doc["relabel"] = relabel;
    doc["records"] = records;
    doc["slope"] = result.slope ? json(*result.slope) : json(nullptr);
    emit_json(flags, doc);
    return 0;
  }
};

struct AccuracyCommand {
  FamilyFlags family;
  std::string graph_path;
  std::string mode;
  std::string init;
  std::string name;
  std::size_t nodes = 2000;
  std::size_t horizon = 10;
  std::size_t runs = 10000;
  std::size_t repetitions = 3;
  double seed_fraction = 0.01;

  void add_to(CLI::App& app) {
    auto* sub = app.add_subcommand("accuracy", "Per-node error of message passing against Monte-Carlo");
    family.add_to(sub);
    auto* g = sub->add_option("--graph", graph_path, "Graph file (default: generate one)")->check(CLI::ExistingFile);
    sub->add_option("--mode", mode, "Override the graph file mode")->check(CLI::IsMember({"directed", "undirected"}));
    sub->add_option("--init", init, "Initial condition file (default: random sure seeds)")
        ->check(CLI::ExistingFile)
        ->needs(g);
    sub->add_option("--name", name, "Name recorded in the output");
    sub->add_option("--nodes", nodes, "Generated graph size")->capture_default_str();
    sub->add_option("--horizon", horizon, "Number of time steps T")->capture_default_str();
    sub->add_option("--runs", runs, "Number of Monte-Carlo runs")->capture_default_str();
    sub->add_option("--repetitions", repetitions, "Timed runs per estimator (median reported)")
        ->capture_default_str();
    sub->add_option("--seed-fraction", seed_fraction, "Fraction of sure seeds")->capture_default_str();
  }

  int run(const GlobalFlags& flags) const {
    DirectedGraph g;
    std::string label = name;
    if (!graph_path.empty()) {
      g = GraphFlags{graph_path, mode}.load();
      if (label.empty()) label = graph_path;
    } else {
      const GenSpec spec = family.spec(nodes, flags.seed);
      g = generate(spec);
      if (label.empty()) label = family_name(spec.family) + "_" + std::to_string(nodes);
    }
    const InitialCondition p0 = init.empty()
                                    ? random_seed_set(g, seed_count_for_fraction(g.node_count(), seed_fraction), flags.seed)
                                    : load_init(init, g);
    const AccuracyRecord r = run_accuracy(label, g, p0, horizon, runs, flags.seed, flags.threads, repetitions);
    json doc;
    doc["graph"] = r.graph_name;
    doc["nodes"] = r.nodes;
    doc["edges"] = r.edges;
    doc["horizon"] = r.horizon;
    doc["runs"] = r.runs;
    doc["delta_p"] = r.delta_p;
    doc["sigma_dmp"] = r.sigma_dmp;
    doc["sigma_mc"] = r.sigma_mc;
    doc["dmp_runtime"] = r.dmp_runtime;
    doc["mc_runtime"] = r.mc_runtime;
    if (csv(flags)) {
      emit(flags, records_csv({doc}));
    } else {
      emit_json(flags, doc);
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence estimation by dynamic message passing"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--out", flags.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", flags.seed, "Random seed")->capture_default_str();

  GenCommand gen;
  EstimateCommand estimate;
  EstimateInfCommand estimate_inf;
  LtEstimateCommand lt_estimate_cmd;
  McCommand mc;
  OracleCommand oracle;
  CompareCommand compare;
  CertifyCommand certify;
  BracketCommand bracket;
  BenchCommand bench;
  AccuracyCommand accuracy;
  gen.add_to(app);
  estimate.add_to(app);
  estimate_inf.add_to(app);
  lt_estimate_cmd.add_to(app);
  mc.add_to(app);
  oracle.add_to(app);
  compare.add_to(app);
  certify.add_to(app);
  bracket.add_to(app);
  bench.add_to(app);
  accuracy.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const std::string which = app.get_subcommands().front()->get_name();
    if (which == "gen") return gen.run(flags);
    if (which == "estimate") return estimate.run(flags);
    if (which == "estimate-inf") return estimate_inf.run(flags);
    if (which == "lt-estimate") return lt_estimate_cmd.run(flags);
    if (which == "mc") return mc.run(flags);
    if (which == "oracle") return oracle.run(flags);
    if (which == "compare") return compare.run(flags);
    if (which == "certify") return certify.run(flags);
    if (which == "bracket") return bracket.run(flags);
    if (which == "bench") return bench.run(flags);
    if (which == "accuracy") return accuracy.run(flags);
    std::cerr << "error: unknown subcommand " << which << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
