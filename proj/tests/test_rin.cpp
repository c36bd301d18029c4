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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <json.hpp>

#include "rinq/rin.hpp"
#include "support.hpp"

using namespace rinq;
using Catch::Approx;

namespace {

std::vector<ResidueRecord> line_of(std::initializer_list<double> xs) {
  std::vector<ResidueRecord> out;
  int seq = 1;
  for (double x : xs) out.push_back({{'A', seq++, std::nullopt}, "GLY", {x, 0.0, 0.0}});
  return out;
}

std::vector<ResidueRecord> random_cloud(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::vector<ResidueRecord> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({{'A', static_cast<int>(i + 1), std::nullopt}, "ALA", {u(rng), u(rng), u(rng)}});
  return out;
}

}  // namespace

TEST_CASE("contacts are inclusive at the cutoff") {
  // 0 -- 8 Angstrom -- 1, 2 sits 8.0001 beyond 1.
  const auto g = build_rin(line_of({0.0, 8.0, 16.0001}));
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == Edge{0, 1});
}

TEST_CASE("three points on a 3.8 Angstrom line") {
  const auto g = build_rin(line_of({0.0, 3.8, 7.6}));
  CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  const auto a = adjacency(g);
  CHECK(a.edge_count() == 3);
  CHECK(a.entries.is_symmetric());
  CHECK(a.entries.trace() == 0.0);
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(build_rin({}), DegenerateInputError);
  CHECK_THROWS_AS(build_rin(line_of({0.0}), 0.0), UsageError);
  CHECK_THROWS_AS(build_rin(line_of({0.0}), -1.0), UsageError);
  const auto single = build_rin(line_of({0.0}));
  CHECK(single.edges.empty());
  CHECK_FALSE(single.warnings.empty());
  CHECK_THROWS_AS(degree_unit_vector(adjacency(build_rin(line_of({0.0, 50.0})))), DegenerateInputError);
}

TEST_CASE("adjacency invariants on random clouds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto residues = random_cloud(5 + trial % 20, rng);
    const auto g = build_rin(residues);
    const auto a = adjacency(g);
    CHECK(a.entries.is_symmetric(0.0));
    CHECK(a.entries.trace() == 0.0);
    CHECK(a.entries.frobenius_norm() == Approx(std::sqrt(2.0 * g.edges.size())));
    double degree_sum = 0.0;
    for (double d : a.degrees()) degree_sum += d;
    CHECK(degree_sum == Approx(2.0 * g.edges.size()));
  }
}

TEST_CASE("edge sets grow with the cutoff") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto residues = random_cloud(15, rng);
    std::vector<Edge> previous;
    for (double cutoff : {4.0, 6.0, 8.0, 10.0, 14.0}) {
      const auto g = build_rin(residues, cutoff);
      CHECK(std::includes(g.edges.begin(), g.edges.end(), previous.begin(), previous.end()));
      previous = g.edges;
    }
  }
}

TEST_CASE("connected components") {
  const auto g = build_rin(line_of({0.0, 5.0, 30.0, 35.0, 100.0}));
  const auto a = adjacency(g);
  CHECK(connected_components(a) == std::vector<std::size_t>{0, 0, 1, 1, 2});
  CHECK_FALSE(is_connected(a));
  CHECK(is_connected(testing::xy1_adjacency()));
}

TEST_CASE("1XY1 fixture reproduces the reference contact graph") {
  const auto g = testing::fixture_graph("1XY1");
  REQUIRE(g.size() == 9);
  CHECK(g.edges.size() == 23);
  CHECK(adjacency(g).entries == testing::xy1_adjacency().entries);
  CHECK(g.nodes[5].label() == "A:6:CYS");
}

TEST_CASE("exports") {
  const auto g = build_rin(line_of({0.0, 3.8, 20.0}), 8.0, "TEST");
  const std::vector<double> scores{0.5, 0.25, 0.0};

  const auto dot = export_graph(g, GraphFormat::dot, &scores);
  CHECK(dot.find("graph \"TEST\" {") == 0);
  CHECK(dot.find("0 -- 1;") != std::string::npos);
  CHECK(dot.find("label=\"A:2:GLY\", score=0.25") != std::string::npos);

  const auto xml = export_graph(g, GraphFormat::graphml);
  CHECK(xml.find("<edge source=\"n0\" target=\"n1\"/>") != std::string::npos);
  CHECK(xml.find("key=\"score\"") == std::string::npos);

  const auto j = nlohmann::json::parse(export_graph(g, GraphFormat::json, &scores));
  CHECK(j["pdb_id"] == "TEST");
  CHECK(j["nodes"].size() == 3);
  CHECK(j["nodes"][1]["score"] == 0.25);
  CHECK(j["edges"] == nlohmann::json::parse("[[0,1]]"));

  const std::vector<double> short_scores{1.0};
  CHECK_THROWS_AS(export_graph(g, GraphFormat::dot, &short_scores), UsageError);
  CHECK_THROWS_AS(parse_graph_format("png"), UsageError);
}
