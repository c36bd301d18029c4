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

// Shared fixtures for the test binaries.

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rinq/rinq.hpp"

#ifndef RINQ_DATA_DIR
#define RINQ_DATA_DIR "data"
#endif

namespace rinq::testing {

inline std::string data_path(const std::string& rel) { return std::string(RINQ_DATA_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture_text(const std::string& pdb_id) { return read_text(data_path("pdb/" + pdb_id + ".pdb")); }

inline ResidueGraph fixture_graph(const std::string& pdb_id, double cutoff = kDefaultCutoff) {
  const auto models = parse_pdb(fixture_text(pdb_id));
  return build_rin(extract_ca(select_model(models), std::nullopt), cutoff, pdb_id);
}

// Contact graph of the 1XY1 fixture, written out by hand (index = residue - 1).
inline AdjacencyMatrix xy1_adjacency() {
  const int rows[9][9] = {{0, 1, 1, 0, 1, 1, 1, 1, 0}, {1, 0, 1, 1, 1, 1, 0, 0, 0},
                          {1, 1, 0, 1, 1, 1, 0, 0, 0}, {0, 1, 1, 0, 1, 1, 0, 0, 0},
                          {1, 1, 1, 1, 0, 1, 1, 0, 0}, {1, 1, 1, 1, 1, 0, 1, 1, 1},
                          {1, 0, 0, 0, 1, 1, 0, 1, 1}, {1, 0, 0, 0, 0, 1, 1, 0, 1},
                          {0, 0, 0, 0, 0, 1, 1, 1, 0}};
  AdjacencyMatrix a{Matrix(9, 9)};
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) a.entries(i, j) = rows[i][j];
  return a;
}

// Published 1XY1 scores keyed by residue number.
inline const std::map<int, double> kXy1Eigenvector = {
    {6, 0.4545}, {5, 0.3876}, {1, 0.3820}, {2, 0.3402}, {3, 0.3402},
    {7, 0.3049}, {4, 0.2807}, {8, 0.2446}, {9, 0.1851}};
inline const std::map<int, double> kXy1Estrada = {
    {6, 47.1546}, {5, 34.7512}, {1, 33.6590}, {3, 27.4557}, {2, 27.4557},
    {7, 22.8833}, {4, 19.3854}, {8, 15.8201}, {9, 10.0360}};

inline AdjacencyMatrix random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  AdjacencyMatrix a{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) a.entries(i, j) = a.entries(j, i) = 1.0;
  return a;
}

// Rejection-samples until connected.
inline AdjacencyMatrix random_connected_graph(std::size_t n, double p, std::mt19937_64& rng) {
  for (;;) {
    auto a = random_graph(n, p, rng);
    if (is_connected(a)) return a;
  }
}

// Symmetric QUBO with entries uniform in [-1, 1].
inline QuboMatrix random_qubo(std::size_t n, std::size_t tau, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QuboMatrix q;
  q.entries = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) q.entries(i, j) = q.entries(j, i) = u(rng);
  q.tau = tau;
  return q;
}

// x^T Q x over every pair, no shortcuts.
inline double naive_energy(const Matrix& q, const BitVector& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) e += q(i, j) * x[i] * x[j];
  return e;
}

}  // namespace rinq::testing
