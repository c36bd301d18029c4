// Copyright 2026 The rinq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Residue interaction network: residues are nodes, C-alpha pairs within the
// cutoff distance are edges.

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rinq/error.hpp"
#include "rinq/matrix.hpp"
#include "rinq/pdb.hpp"

namespace rinq {

inline constexpr double kDefaultCutoff = 8.0;

using Edge = std::pair<std::size_t, std::size_t>;  // first < second

struct ResidueGraph {
  std::string pdb_id;
  std::vector<ResidueRecord> nodes;  // position == bit index
  std::vector<Edge> edges;           // lexicographically sorted
  double cutoff = kDefaultCutoff;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Symmetric 0/1 matrix with a zero diagonal.
struct AdjacencyMatrix {
  Matrix entries;

  std::size_t size() const noexcept { return entries.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries(i, j); }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (entries(i, j) != 0.0) ++m;
    return m;
  }

  std::vector<double> degrees() const {
    std::vector<double> d(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) d[i] += entries(i, j);
    return d;
  }

  static AdjacencyMatrix from_edges(std::size_t n, const std::vector<Edge>& edges) {
    AdjacencyMatrix a{Matrix(n, n)};
    for (const auto& [i, j] : edges) {
      if (i == j || i >= n || j >= n) throw UsageError("edge out of range or self-loop");
      a.entries(i, j) = 1.0;
      a.entries(j, i) = 1.0;
    }
    return a;
  }
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Connects residues i < j whose C-alpha atoms are at most `cutoff` apart
/// (distance == cutoff counts as a contact).
inline ResidueGraph build_rin(std::vector<ResidueRecord> residues, double cutoff = kDefaultCutoff,
                              std::string pdb_id = {}) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw UsageError("cutoff must be positive");
  if (residues.empty()) throw DegenerateInputError("no residues to build a network from");
  ResidueGraph g;
  g.pdb_id = std::move(pdb_id);
  g.cutoff = cutoff;
  g.nodes = std::move(residues);
  const std::size_t n = g.nodes.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(g.nodes[i].ca_position, g.nodes[j].ca_position) <= cutoff)
        g.edges.emplace_back(i, j);
  if (n < 2) g.warnings.push_back("degenerate graph: fewer than 2 residues");
  return g;
}

inline AdjacencyMatrix adjacency(const ResidueGraph& g) {
  return AdjacencyMatrix::from_edges(g.size(), g.edges);
}

/// d / ||d||_2 for the degree vector d.
inline std::vector<double> degree_unit_vector(const AdjacencyMatrix& a) {
  auto d = a.degrees();
  const double norm = norm2(d);
  if (norm == 0.0) throw DegenerateInputError("graph has no edges; degree vector cannot be normalized");
  for (double& v : d) v /= norm;
  return d;
}

/// Connected components as a node -> component id map (ids in discovery order).
inline std::vector<std::size_t> connected_components(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (a(u, v) != 0.0 && comp[v] == unset) {
          comp[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const AdjacencyMatrix& a) {
  const auto comp = connected_components(a);
  for (auto c : comp)
    if (c != 0) return false;
  return true;
}

enum class GraphFormat { dot, graphml, json };

inline GraphFormat parse_graph_format(std::string_view s) {
  if (s == "dot") return GraphFormat::dot;
  if (s == "graphml") return GraphFormat::graphml;
  if (s == "json") return GraphFormat::json;
  throw UsageError("unknown graph format '" + std::string(s) + "'");
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string format_score(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace detail

inline nlohmann::json graph_to_json(const ResidueGraph& g, const std::vector<double>* scores = nullptr) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& r = g.nodes[i];
    nlohmann::json node{{"index", i},
                        {"chain", std::string(1, r.chain_id())},
                        {"res_seq", r.res_seq()},
                        {"res_name", r.res_name},
                        {"label", r.label()}};
    if (r.id.insertion_code) node["insertion_code"] = std::string(1, *r.id.insertion_code);
    if (scores) node["score"] = (*scores)[i];
    nodes.push_back(std::move(node));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [i, j] : g.edges) edges.push_back({i, j});
  return {{"pdb_id", g.pdb_id}, {"cutoff", g.cutoff}, {"nodes", nodes}, {"edges", edges}};
}

/// Serializes the graph with residue labels and, when given, one score per node.
inline std::string export_graph(const ResidueGraph& g, GraphFormat format,
                                const std::vector<double>* scores = nullptr) {
  if (scores && scores->size() != g.size())
    throw UsageError("score vector does not cover every node");
  std::ostringstream out;
  switch (format) {
    case GraphFormat::json:
      out << graph_to_json(g, scores).dump(2) << '\n';
      break;
    case GraphFormat::dot: {
      out << "graph \"" << (g.pdb_id.empty() ? "rin" : g.pdb_id) << "\" {\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        out << "  " << i << " [label=\"" << g.nodes[i].label() << "\"";
        if (scores) out << ", score=" << detail::format_score((*scores)[i]);
        out << "];\n";
      }
      for (const auto& [i, j] : g.edges) out << "  " << i << " -- " << j << ";\n";
      out << "}\n";
      break;
    }
    case GraphFormat::graphml: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
      if (scores)
        out << "  <key id=\"score\" for=\"node\" attr.name=\"score\" attr.type=\"double\"/>\n";
      out << "  <graph id=\"" << detail::xml_escape(g.pdb_id.empty() ? "rin" : g.pdb_id)
          << "\" edgedefault=\"undirected\">\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        out << "    <node id=\"n" << i << "\"><data key=\"label\">"
            << detail::xml_escape(g.nodes[i].label()) << "</data>";
        if (scores) out << "<data key=\"score\">" << detail::format_score((*scores)[i]) << "</data>";
        out << "</node>\n";
      }
      for (const auto& [i, j] : g.edges)
        out << "    <edge source=\"n" << i << "\" target=\"n" << j << "\"/>\n";
      out << "  </graph>\n</graphml>\n";
      break;
    }
  }
  return out.str();
}

}  // namespace rinq
