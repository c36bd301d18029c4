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

// Classical centrality baselines: eigenvector centrality by power iteration
// and Estrada (subgraph) centrality from the full matrix exponential.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rinq/error.hpp"
#include "rinq/matrix.hpp"
#include "rinq/rin.hpp"

namespace rinq {

enum class CentralityMeasure { eigenvector, estrada };

inline std::string to_string(CentralityMeasure m) {
  return m == CentralityMeasure::eigenvector ? "eigenvector" : "estrada";
}

inline CentralityMeasure parse_measure(std::string_view s) {
  if (s == "eigenvector") return CentralityMeasure::eigenvector;
  if (s == "estrada") return CentralityMeasure::estrada;
  throw UsageError("unknown centrality measure '" + std::string(s) + "'");
}

struct CentralityScores {
  CentralityMeasure measure = CentralityMeasure::eigenvector;
  std::vector<double> values;  // indexed by node
  std::optional<double> eigenvalue_estimate;
  std::size_t iterations = 0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return values.size(); }
};

/// Power iteration for the principal eigenvector of A.
///
/// Iterates with the shifted operator (A + I), which has the same eigenvectors
/// as A but does not oscillate on bipartite graphs, from the uniform start
/// vector. Stops once ||x_{k+1} - x_k||_1 < n * tol and, with r the observed
/// contraction ratio of successive steps, the remaining error estimate
/// step * r / (1 - r) is also below tol. The second test only matters on
/// graphs with a small spectral gap, where the step rule alone stops early.
inline CentralityScores eigenvector_centrality(const AdjacencyMatrix& a, int max_iter = 1000,
                                               double tol = 1e-6) {
  const std::size_t n = a.size();
  if (n == 0) throw DegenerateInputError("empty adjacency matrix");
  if (a.edge_count() == 0)
    throw DegenerateInputError("graph has no edges; eigenvector centrality is undefined");

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  double delta = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      const auto row = a.entries.row(i);
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      next[i] = acc;
    }
    const double norm = norm2(next);
    delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      delta += std::abs(next[i] - x[i]);
    }
    x.swap(next);
    const double ratio = delta / previous;
    previous = delta;
    const bool settled = delta == 0.0 || (ratio < 1.0 && delta * ratio / (1.0 - ratio) < tol);
    if (delta < static_cast<double>(n) * tol && settled) {
      CentralityScores out;
      out.measure = CentralityMeasure::eigenvector;
      const auto ax = a.entries * std::span<const double>(x);
      out.eigenvalue_estimate = dot(x, ax);  // Rayleigh quotient, ||x|| = 1
      out.values = std::move(x);
      out.iterations = static_cast<std::size_t>(iter);
      if (!is_connected(a))
        out.warnings.push_back("graph disconnected: scores concentrate on the dominant component");
      return out;
    }
  }
  throw ConvergenceError(delta, "power iteration did not converge in " +
                                    std::to_string(max_iter) + " iterations (residual " +
                                    std::to_string(delta) + ")");
}

/// exp(M) for a square matrix by scaling and squaring of the Taylor series.
inline Matrix matrix_exponential(const Matrix& m) {
  if (!m.square()) throw UsageError("matrix exponential needs a square matrix");
  const std::size_t n = m.rows();
  const double norm = m.frobenius_norm();
  int squarings = 0;
  if (norm > 1.0) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm))));
  const Matrix scaled = m * std::ldexp(1.0, -squarings);

  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k < 200; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    sum += term;
    if (term.frobenius_norm() < 1e-12 * sum.frobenius_norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  if (m.is_symmetric(0.0)) sum.symmetrize();
  return sum;
}

inline Matrix matrix_exponential(const AdjacencyMatrix& a) { return matrix_exponential(a.entries); }

/// Estrada centrality: the diagonal of exp(A).
inline CentralityScores estrada_centrality(const AdjacencyMatrix& a) {
  const Matrix e = matrix_exponential(a);
  CentralityScores out;
  out.measure = CentralityMeasure::estrada;
  out.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = e(i, i);
  return out;
}

inline CentralityScores compute_centrality(const AdjacencyMatrix& a, CentralityMeasure m) {
  return m == CentralityMeasure::eigenvector ? eigenvector_centrality(a) : estrada_centrality(a);
}

/// Indices of the tau largest values, descending; equal scores keep ascending index order.
inline std::vector<std::size_t> top_tau(std::span<const double> scores, std::size_t tau) {
  if (tau < 1 || tau > scores.size())
    throw UsageError("tau must lie in [1, " + std::to_string(scores.size()) + "], got " +
                     std::to_string(tau));
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(tau);
  return order;
}

inline std::vector<std::size_t> top_tau(const CentralityScores& s, std::size_t tau) {
  return top_tau(s.values, tau);
}

// index,chain,res_seq,res_name,score
inline std::string scores_to_csv(const ResidueGraph& g, const CentralityScores& s) {
  std::ostringstream out;
  out.precision(17);
  out << "index,chain,res_seq,res_name,score\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& r = g.nodes[i];
    out << i << ',' << r.chain_id() << ',' << r.res_seq();
    if (r.id.insertion_code) out << *r.id.insertion_code;
    out << ',' << r.res_name << ',' << s.values[i] << '\n';
  }
  return out.str();
}

inline nlohmann::json scores_to_json(const ResidueGraph& g, const CentralityScores& s) {
  nlohmann::json scores = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& r = g.nodes[i];
    scores.push_back({{"index", i},
                      {"chain", std::string(1, r.chain_id())},
                      {"res_seq", r.res_seq()},
                      {"res_name", r.res_name},
                      {"score", s.values[i]}});
  }
  nlohmann::json out{{"pdb_id", g.pdb_id}, {"measure", to_string(s.measure)}, {"scores", scores},
                     {"warnings", s.warnings}};
  if (s.eigenvalue_estimate) out["eigenvalue"] = *s.eigenvalue_estimate;
  return out;
}

}  // namespace rinq
