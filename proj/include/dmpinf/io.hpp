#pragma once
/*
  Text formats.

  Graph file:
      # comment
      %mode directed|undirected
      %nodes N            (optional; default max id + 1)
      %ids labels         (optional; node tokens are arbitrary strings)
      u v b               directed line
      u v b_uv [b_vu]     undirected line, b_vu defaults to b_uv

  Node-value file (initial condition, thresholds, activation probabilities):
      node value          whitespace or comma separated, '#' comments,
                          an optional "node,..." header line
*/

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmpinf/graph.hpp"

namespace dmpinf {

enum class GraphMode { directed, undirected };

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < s.size()) {
    while (i < s.size() && is_sep(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_sep(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline bool parse_index(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

inline bool parse_real(std::string_view tok, double& out) {
  if (tok.empty()) return false;
  if (tok.front() == '+') tok.remove_prefix(1);
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

inline double parse_probability(std::string_view tok, std::size_t line) {
  double v = 0.0;
  if (!parse_real(tok, v)) throw ParseError(line, "malformed number '" + std::string(tok) + "'");
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParseError(line, "probability " + std::string(tok) + " outside [0,1]");
  }
  return v;
}

/// Shortest representation that parses back to the identical double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses the graph format. `mode_override`, when set, takes precedence over a
/// `%mode` header; one of the two must be present.
inline DirectedGraph parse_graph(std::string_view text,
                                 std::optional<GraphMode> mode_override = std::nullopt) {
  std::optional<GraphMode> header_mode;
  std::optional<std::uint64_t> declared_nodes;
  bool labelled = false;
  bool seen_data = false;

  std::vector<Arc> arcs;
  // (u << 32 | v) -> arc index, for duplicate detection
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::unordered_map<std::string, NodeId> label_ids;
  std::vector<std::string> labels;
  std::uint64_t max_id = 0;
  bool any_node = false;

  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    const std::string_view body = detail::trim(detail::strip_comment(lines[ln]));
    if (body.empty()) continue;

    if (body.front() == '%') {
      if (seen_data) throw ParseError(line_no, "header directive after data lines");
      const auto f = detail::split_fields(body.substr(1));
      if (f.size() == 2 && f[0] == "mode") {
        if (f[1] == "directed") {
          header_mode = GraphMode::directed;
        } else if (f[1] == "undirected") {
          header_mode = GraphMode::undirected;
        } else {
          throw ParseError(line_no, "unknown mode '" + std::string(f[1]) + "'");
        }
      } else if (f.size() == 2 && f[0] == "nodes") {
        std::uint64_t n = 0;
        if (!detail::parse_index(f[1], n)) throw ParseError(line_no, "malformed node count");
        declared_nodes = n;
      } else if (f.size() == 2 && f[0] == "ids") {
        if (f[1] == "labels") {
          labelled = true;
        } else if (f[1] != "integers") {
          throw ParseError(line_no, "unknown id kind '" + std::string(f[1]) + "'");
        }
      } else {
        throw ParseError(line_no, "unknown header directive");
      }
      continue;
    }

    if (!seen_data) {
      seen_data = true;
      if (!mode_override && !header_mode) {
        throw ParseError(line_no, "graph mode not declared (use '%mode' or a mode flag)");
      }
      if (labelled && declared_nodes) {
        throw ParseError(line_no, "'%nodes' cannot be combined with '%ids labels'");
      }
    }
    const GraphMode mode = mode_override ? *mode_override : *header_mode;

    const auto f = detail::split_fields(body);
    const bool width_ok = mode == GraphMode::directed ? f.size() == 3 : (f.size() == 3 || f.size() == 4);
    if (!width_ok) throw ParseError(line_no, "malformed line: expected 'u v b'" +
                                                 std::string(mode == GraphMode::undirected ? " [b_vu]" : ""));

    const auto node_of = [&](std::string_view tok) -> std::uint64_t {
      if (labelled) {
        auto [it, inserted] = label_ids.try_emplace(std::string(tok), static_cast<NodeId>(labels.size()));
        if (inserted) labels.emplace_back(tok);
        return it->second;
      }
      std::uint64_t id = 0;
      if (!detail::parse_index(tok, id) || id >= kNoArc) {
        throw ParseError(line_no, "malformed node id '" + std::string(tok) + "'");
      }
      if (declared_nodes && id >= *declared_nodes) {
        throw ParseError(line_no, "node id " + std::string(tok) + " outside declared node count");
      }
      return id;
    };
    const std::uint64_t u = node_of(f[0]);
    const std::uint64_t v = node_of(f[1]);
    const double b_uv = detail::parse_probability(f[2], line_no);
    const double b_vu = f.size() == 4 ? detail::parse_probability(f[3], line_no) : b_uv;
    if (u == v) throw ParseError(line_no, "self-loop on node " + std::string(f[0]));
    max_id = std::max({max_id, u, v});
    any_node = true;

    const auto key = [](std::uint64_t a, std::uint64_t c) { return (a << 32) | c; };
    if (mode == GraphMode::directed) {
      if (!index.try_emplace(key(u, v), arcs.size()).second) {
        throw ParseError(line_no, "duplicate arc " + std::string(f[0]) + " -> " + std::string(f[1]));
      }
      arcs.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), b_uv});
    } else {
      const auto fwd = index.find(key(u, v));
      const auto bwd = index.find(key(v, u));
      if (fwd != index.end() || bwd != index.end()) {
        const bool same = fwd != index.end() && bwd != index.end() &&
                          arcs[fwd->second].b == b_uv && arcs[bwd->second].b == b_vu;
        if (!same) {
          throw ParseError(line_no, "duplicate edge " + std::string(f[0]) + " - " +
                                        std::string(f[1]) + " with conflicting b");
        }
        continue;
      }
      index.emplace(key(u, v), arcs.size());
      arcs.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), b_uv});
      index.emplace(key(v, u), arcs.size());
      arcs.push_back({static_cast<NodeId>(v), static_cast<NodeId>(u), b_vu});
    }
  }

  std::size_t n = 0;
  if (labelled) {
    n = labels.size();
  } else if (declared_nodes) {
    n = static_cast<std::size_t>(*declared_nodes);
  } else if (any_node) {
    n = static_cast<std::size_t>(max_id + 1);
  }
  return DirectedGraph::from_arcs(n, std::move(arcs), std::move(labels));
}

/// Writes the graph format. Graphs whose every arc has a reverse are written
/// as undirected lines carrying both probabilities.
inline std::string serialize_graph(const DirectedGraph& g) {
  std::string out;
  const bool undirected = g.is_symmetric_structure();
  out += undirected ? "%mode undirected\n" : "%mode directed\n";
  if (g.has_labels()) {
    out += "%ids labels\n";
  } else {
    out += "%nodes " + std::to_string(g.node_count()) + "\n";
  }
  const auto name = [&](NodeId v) { return g.has_labels() ? g.labels()[v] : std::to_string(v); };
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    const NodeId u = g.source(e);
    const NodeId v = g.target(e);
    if (undirected) {
      if (u > v) continue;
      out += name(u) + " " + name(v) + " " + detail::format_real(g.b(e));
      const double back = g.b(g.reverse(e));
      if (back != g.b(e)) out += " " + detail::format_real(back);
      out += "\n";
    } else {
      out += name(u) + " " + name(v) + " " + detail::format_real(g.b(e)) + "\n";
    }
  }
  return out;
}

/// Parses `node value` lines; unlisted nodes get `default_value`.
inline std::vector<double> parse_node_values(std::string_view text, const DirectedGraph& g,
                                             double default_value) {
  std::vector<double> values(g.node_count(), default_value);
  std::vector<bool> seen(g.node_count(), false);
  std::unordered_map<std::string_view, NodeId> by_label;
  if (g.has_labels()) {
    for (NodeId v = 0; v < g.node_count(); ++v) by_label.emplace(g.labels()[v], v);
  }

  const auto lines = detail::lines_of(text);
  bool first_data = true;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    const std::string_view body = detail::trim(detail::strip_comment(lines[ln]));
    if (body.empty()) continue;
    const auto f = detail::split_fields(body);
    if (first_data && !f.empty() && f[0] == "node") {
      first_data = false;
      continue;
    }
    first_data = false;
    if (f.size() != 2) throw ParseError(line_no, "malformed line: expected 'node value'");

    NodeId node = 0;
    if (g.has_labels()) {
      const auto it = by_label.find(f[0]);
      if (it == by_label.end()) throw ParseError(line_no, "unknown node '" + std::string(f[0]) + "'");
      node = it->second;
    } else {
      std::uint64_t id = 0;
      if (!detail::parse_index(f[0], id)) {
        throw ParseError(line_no, "malformed node id '" + std::string(f[0]) + "'");
      }
      if (id >= g.node_count()) throw ParseError(line_no, "unknown node " + std::string(f[0]));
      node = static_cast<NodeId>(id);
    }
    if (seen[node]) throw ParseError(line_no, "node " + std::string(f[0]) + " listed twice");
    seen[node] = true;
    values[node] = detail::parse_probability(f[1], line_no);
  }
  return values;
}

inline InitialCondition parse_initial_condition(std::string_view text, const DirectedGraph& g) {
  return InitialCondition(parse_node_values(text, g, 0.0));
}

}  // namespace dmpinf
