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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "rinq/centrality.hpp"
#include "support.hpp"

using namespace rinq;
using Catch::Approx;

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

AdjacencyMatrix path(std::size_t n) {
  AdjacencyMatrix a{Matrix(n, n)};
  for (std::size_t i = 0; i + 1 < n; ++i) a.entries(i, i + 1) = a.entries(i + 1, i) = 1.0;
  return a;
}

AdjacencyMatrix permuted(const AdjacencyMatrix& a, const std::vector<std::size_t>& perm) {
  AdjacencyMatrix b{Matrix(a.size(), a.size())};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) b.entries(perm[i], perm[j]) = a.entries(i, j);
  return b;
}

}  // namespace

TEST_CASE("bipartite graphs converge") {
  // P3: principal eigenvector (1, sqrt2, 1) / 2.
  const auto s = eigenvector_centrality(path(3));
  CHECK(s.values[0] == Approx(0.5).margin(1e-6));
  CHECK(s.values[1] == Approx(std::sqrt(0.5)).margin(1e-6));
  CHECK(*s.eigenvalue_estimate == Approx(std::sqrt(2.0)).margin(1e-9));
  const auto k2 = eigenvector_centrality(path(2));
  CHECK(k2.values[0] == Approx(std::sqrt(0.5)));
}

TEST_CASE("degenerate and disconnected graphs") {
  CHECK_THROWS_AS(eigenvector_centrality(AdjacencyMatrix{Matrix(4, 4)}), DegenerateInputError);
  AdjacencyMatrix two{Matrix(5, 5)};
  two.entries(0, 1) = two.entries(1, 0) = 1.0;
  two.entries(2, 3) = two.entries(3, 2) = 1.0;
  two.entries(3, 4) = two.entries(4, 3) = 1.0;
  const auto s = eigenvector_centrality(two);
  CHECK_FALSE(s.warnings.empty());
  CHECK(s.values[0] < 1e-3);
  CHECK(s.values[3] > s.values[2]);
}

TEST_CASE("non-convergence reports the residual") {
  std::mt19937_64 rng(5);
  const auto a = testing::random_connected_graph(20, 0.3, rng);
  try {
    eigenvector_centrality(a, 2, 1e-15);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("power iteration agrees with a dense eigensolver") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> size(3, 30);
  std::uniform_real_distribution<double> density(0.15, 0.7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = testing::random_connected_graph(size(rng), density(rng), rng);
    const auto s = eigenvector_centrality(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a.entries));
    Eigen::VectorXd v = es.eigenvectors().col(a.size() - 1);
    if (v.sum() < 0) v = -v;
    double norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(s.values[i] >= 0.0);
      CHECK(s.values[i] == Approx(v(i)).margin(1e-5));
      norm += s.values[i] * s.values[i];
    }
    CHECK(std::sqrt(norm) == Approx(1.0).margin(1e-6));
    CHECK(*s.eigenvalue_estimate == Approx(es.eigenvalues()(a.size() - 1)).margin(1e-6));
  }
}

TEST_CASE("matrix exponential agrees with the spectral form") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_graph(2 + trial % 20, 0.5, rng);
    const Matrix e = matrix_exponential(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a.entries));
    const Eigen::MatrixXd ref = es.eigenvectors() *
                                es.eigenvalues().array().exp().matrix().asDiagonal() *
                                es.eigenvectors().transpose();
    CHECK(e.is_symmetric(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(e(i, j) == Approx(ref(i, j)).epsilon(1e-10).margin(1e-10));
    CHECK(e.trace() == Approx(es.eigenvalues().array().exp().sum()).epsilon(1e-10));
  }
  CHECK(matrix_exponential(Matrix(3, 3)) == Matrix::identity(3));
  CHECK_THROWS_AS(matrix_exponential(Matrix(2, 3)), UsageError);
}

TEST_CASE("scores are permutation equivariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_connected_graph(12, 0.4, rng);
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto b = permuted(a, perm);
    for (auto m : {CentralityMeasure::eigenvector, CentralityMeasure::estrada}) {
      const auto sa = compute_centrality(a, m), sb = compute_centrality(b, m);
      for (std::size_t i = 0; i < 12; ++i)
        CHECK(sb.values[perm[i]] == Approx(sa.values[i]).epsilon(1e-9).margin(1e-6));
    }
  }
}

TEST_CASE("1XY1 reference network") {
  const auto a = testing::xy1_adjacency();
  const auto ec = eigenvector_centrality(a);
  for (const auto& [residue, value] : testing::kXy1Eigenvector)
    CHECK(ec.values[residue - 1] == Approx(value).margin(1e-4));
  const auto est = estrada_centrality(a);
  for (const auto& [residue, value] : testing::kXy1Estrada)
    CHECK(est.values[residue - 1] == Approx(value).margin(1e-3));
  // Residues 2 and 3 are automorphic; the stable order keeps 2 first.
  CHECK(top_tau(ec, 5) == std::vector<std::size_t>{5, 4, 0, 1, 2});
}

TEST_CASE("top_tau") {
  const std::vector<double> v{0.1, 0.9, 0.5, 0.9};
  CHECK(top_tau(v, 1) == std::vector<std::size_t>{1});
  CHECK(top_tau(v, 3) == std::vector<std::size_t>{1, 3, 2});
  CHECK_THROWS_AS(top_tau(v, 0), UsageError);
  CHECK_THROWS_AS(top_tau(v, 5), UsageError);
}

TEST_CASE("measure names") {
  CHECK(parse_measure("estrada") == CentralityMeasure::estrada);
  CHECK(to_string(CentralityMeasure::eigenvector) == "eigenvector");
  CHECK_THROWS_AS(parse_measure("pagerank"), UsageError);
}
