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

// Metropolis simulated annealing over QUBO instances, an exhaustive oracle,
// and the tau-cardinality post-filter.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rinq/error.hpp"
#include "rinq/qubo.hpp"

namespace rinq {

inline constexpr std::uint64_t kDefaultSeed = 7;

enum class BetaInterpolation { geometric, linear };

inline std::string to_string(BetaInterpolation b) {
  return b == BetaInterpolation::geometric ? "geometric" : "linear";
}

inline BetaInterpolation parse_interpolation(std::string_view s) {
  if (s == "geometric") return BetaInterpolation::geometric;
  if (s == "linear") return BetaInterpolation::linear;
  throw UsageError("unknown beta interpolation '" + std::string(s) + "'");
}

struct AnnealSchedule {
  double beta_min = 0.1;
  double beta_max = 4.0;
  std::size_t sweeps = 1000;
  std::size_t reads = 10000;
  BetaInterpolation interpolation = BetaInterpolation::geometric;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (!(beta_min > 0.0) || !(beta_min < beta_max))
      throw UsageError("schedule needs 0 < beta_min < beta_max");
    if (sweeps < 1) throw UsageError("schedule needs at least one sweep");
    if (reads < 1) throw UsageError("schedule needs at least one read");
  }

  /// Inverse temperature of every sweep, beta_min first and beta_max last. A
  /// single-sweep schedule runs at beta_max.
  std::vector<double> betas() const {
    validate();
    std::vector<double> out(sweeps);
    if (sweeps == 1) {
      out[0] = beta_max;
      return out;
    }
    const double last = static_cast<double>(sweeps - 1);
    for (std::size_t s = 0; s < sweeps; ++s) {
      const double t = static_cast<double>(s) / last;
      out[s] = interpolation == BetaInterpolation::geometric
                   ? beta_min * std::pow(beta_max / beta_min, t)
                   : beta_min + (beta_max - beta_min) * t;
    }
    out.back() = beta_max;
    return out;
  }

  friend bool operator==(const AnnealSchedule&, const AnnealSchedule&) = default;
};

inline std::size_t popcount(std::span<const std::uint8_t> bits) {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

/// Canonical order among equal-energy solutions: compare bit by bit from index
/// 0, a selected bit sorting first. For equal popcount this is the
/// lexicographic order of the selected index lists, so {0,1} < {0,2} < {1,2}.
inline bool selection_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if ((a[i] != 0) != (b[i] != 0)) return a[i] != 0;
  return a.size() < b.size();
}

/// Index-0-first rendering, e.g. "110100".
inline std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

inline BitVector bits_from_string(std::string_view s) {
  BitVector b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw UsageError("bit string may only contain 0 and 1");
    b[i] = s[i] == '1';
  }
  return b;
}

inline std::vector<std::size_t> selected_indices(std::span<const std::uint8_t> bits) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out.push_back(i);
  return out;
}

struct Sample {
  BitVector bits;
  double energy = 0.0;
  std::size_t occurrences = 1;

  std::size_t popcount() const { return rinq::popcount(bits); }
};

struct SampleSet {
  std::vector<Sample> samples;  // ascending energy, then selection_less
  AnnealSchedule schedule;
  std::string qubo_digest;

  std::size_t total_reads() const {
    std::size_t t = 0;
    for (const auto& s : samples) t += s.occurrences;
    return t;
  }
};

/// 64-bit FNV-1a over the matrix size and the IEEE-754 bit patterns of its
/// entries, as 16 hex digits.
inline std::string qubo_digest(const Matrix& q) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int k = 0; k < 8; ++k) {
      h ^= (word >> (8 * k)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(q.rows());
  mix(q.cols());
  for (double v : q.data()) mix(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
  std::ostringstream ss;
  ss << std::hex;
  ss.width(16);
  ss.fill('0');
  ss << h;
  return ss.str();
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of read `index`: a pure function of (master seed, index), so reads can
// run in any order or on any thread.
inline std::uint64_t read_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t bounded(std::mt19937_64& rng, std::size_t range) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * range) >> 64);
}

// Off-diagonal nonzeros of each row.
struct SparseRows {
  std::vector<std::size_t> start;
  std::vector<std::size_t> col;
  std::vector<double> val;
  std::vector<double> diag;

  explicit SparseRows(const Matrix& q) : start(q.rows() + 1, 0), diag(q.rows()) {
    for (std::size_t i = 0; i < q.rows(); ++i) {
      diag[i] = q(i, i);
      for (std::size_t j = 0; j < q.cols(); ++j)
        if (j != i && q(i, j) != 0.0) {
          col.push_back(j);
          val.push_back(q(i, j));
        }
      start[i + 1] = col.size();
    }
  }
};

struct NoObserver {
  void operator()(std::span<const std::uint8_t>, std::size_t, double) const noexcept {}
};

// Assumes q symmetric. Flipping bit i changes x^T Q x by
// (1 - 2 x_i) (Q_ii + 2 sum_{j != i} Q_ij x_j).
template <class Observer>
BitVector anneal_one_read(const SparseRows& rows, std::span<const double> betas, std::uint64_t seed,
                          Observer& observer) {
  const std::size_t n = rows.diag.size();
  std::mt19937_64 rng(seed);
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng() & 1u);

  std::vector<double> field(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (x[i])
      for (std::size_t k = rows.start[i]; k < rows.start[i + 1]; ++k) field[rows.col[k]] += rows.val[k];

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  for (const double beta : betas) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    for (const std::size_t i : order) {
      const double delta = (x[i] ? -1.0 : 1.0) * (rows.diag[i] + 2.0 * field[i]);
      bool accept = delta <= 0.0;
      if (!accept) {
        const double exponent = beta * delta;
        // exp(-50) is below the smallest nonzero uniform draw.
        accept = exponent < 50.0 && uniform01(rng) < std::exp(-exponent);
      }
      if (!accept) continue;
      observer(std::span<const std::uint8_t>(x), i, delta);
      const double sign = x[i] ? -1.0 : 1.0;
      x[i] ^= 1u;
      for (std::size_t k = rows.start[i]; k < rows.start[i + 1]; ++k)
        field[rows.col[k]] += sign * rows.val[k];
    }
  }
  return x;
}

inline bool energy_tie(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

/// Collapses duplicate bit strings, recomputes every energy from `q`, and sorts.
inline std::vector<Sample> merge_samples(const Matrix& q, const std::vector<BitVector>& finals) {
  auto less = [](const BitVector& a, const BitVector& b) { return selection_less(a, b); };
  std::map<BitVector, std::size_t, decltype(less)> counts(less);
  for (const auto& b : finals) ++counts[b];
  std::vector<Sample> out;
  out.reserve(counts.size());
  for (const auto& [bits, count] : counts) out.push_back(Sample{bits, qubo_energy(q, bits), count});
  std::stable_sort(out.begin(), out.end(),
                   [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
  return out;
}

/// Runs `schedule.reads` independent anneals. Each read starts from uniform
/// random bits, then for every sweep visits all variables in a fresh random
/// order proposing single flips under the Metropolis rule at that sweep's beta.
///
/// The result depends only on (q, schedule); `threads` changes wall time, not
/// output. `observer(bits_before, index, delta)` sees every accepted move and
/// must be thread-safe when threads > 1.
template <class Observer = detail::NoObserver>
SampleSet anneal(const QuboMatrix& q, const AnnealSchedule& schedule, unsigned threads = 0,
                 Observer observer = {}) {
  if (q.size() < 1) throw UsageError("cannot anneal an empty QUBO");
  const auto betas = schedule.betas();
  const detail::SparseRows rows(q.entries);

  std::vector<BitVector> finals(schedule.reads);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, schedule.reads));

  auto work = [&](std::size_t first, std::size_t last) {
    Observer local = observer;
    for (std::size_t r = first; r < last; ++r)
      finals[r] = detail::anneal_one_read(rows, betas, detail::read_seed(schedule.seed, r), local);
  };
  if (threads <= 1) {
    work(0, schedule.reads);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (schedule.reads + threads - 1) / threads;
    for (std::size_t first = 0; first < schedule.reads; first += chunk)
      pool.emplace_back(work, first, std::min(schedule.reads, first + chunk));
  }

  SampleSet out;
  out.samples = merge_samples(q.entries, finals);
  out.schedule = schedule;
  out.qubo_digest = qubo_digest(q.entries);
  return out;
}

/// Lowest-energy sample selecting exactly tau bits; equal energies resolve by
/// selection_less. Empty when no sample meets the constraint.
inline std::optional<Sample> filter_valid(const SampleSet& set, std::size_t tau) {
  const Sample* best = nullptr;
  for (const auto& s : set.samples) {
    if (s.popcount() != tau) continue;
    if (!best || s.energy < best->energy) best = &s;
  }
  if (!best) return std::nullopt;
  for (const auto& s : set.samples)
    if (s.popcount() == tau && detail::energy_tie(s.energy, best->energy) &&
        selection_less(s.bits, best->bits))
      best = &s;
  return *best;
}

/// Number of reads whose final state selects exactly tau bits.
inline std::size_t valid_read_count(const SampleSet& set, std::size_t tau) {
  std::size_t c = 0;
  for (const auto& s : set.samples)
    if (s.popcount() == tau) c += s.occurrences;
  return c;
}

inline constexpr std::size_t kBruteForceMaxBits = 24;
inline constexpr double kBruteForceMaxSubsets = 1e7;

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// Exhaustive minimum of x^T Q x over all bit vectors, or over those with
/// exactly tau ones. Same tie rule as filter_valid.
inline Sample brute_force_solve(const QuboMatrix& q, std::optional<std::size_t> tau = std::nullopt) {
  const std::size_t n = q.size();
  if (n == 0) throw UsageError("empty QUBO");

  if (tau) {
    if (*tau > n) throw UsageError("tau exceeds the number of variables");
    if (binomial(n, *tau) > kBruteForceMaxSubsets)
      throw InstanceTooLargeError("C(" + std::to_string(n) + "," + std::to_string(*tau) +
                                  ") subsets exceed the exhaustive-search limit");
    const std::size_t k = *tau;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    BitVector best_bits;
    double best = 0.0;
    // Lexicographic order over index sets is the tie order, so a later subset
    // wins only with strictly lower energy.
    while (true) {
      double e = 0.0;
      for (std::size_t a : idx) {
        const auto row = q.entries.row(a);
        for (std::size_t b : idx) e += row[b];
      }
      if (best_bits.empty() || (e < best && !detail::energy_tie(e, best))) {
        best = e;
        best_bits.assign(n, 0);
        for (std::size_t a : idx) best_bits[a] = 1;
      }
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return Sample{best_bits, qubo_energy(q, best_bits), 1};
  }

  if (n > kBruteForceMaxBits)
    throw InstanceTooLargeError(std::to_string(n) + " variables exceed the exhaustive-search limit of " +
                                std::to_string(kBruteForceMaxBits));
  // Gray-code walk with incremental energy.
  const detail::SparseRows rows(q.entries);
  BitVector x(n, 0), best_bits(n, 0);
  std::vector<double> field(n, 0.0);
  double e = 0.0, best = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(step));
    const double sign = x[i] ? -1.0 : 1.0;
    e += sign * (rows.diag[i] + 2.0 * field[i]);
    x[i] ^= 1u;
    for (std::size_t k = rows.start[i]; k < rows.start[i + 1]; ++k) field[rows.col[k]] += sign * rows.val[k];
    if (e < best && !detail::energy_tie(e, best)) {
      best = e;
      best_bits = x;
    } else if (detail::energy_tie(e, best) && selection_less(x, best_bits)) {
      best_bits = x;
    }
  }
  return Sample{best_bits, qubo_energy(q, best_bits), 1};
}

inline nlohmann::json schedule_to_json(const AnnealSchedule& s) {
  return {{"beta_min", s.beta_min},
          {"beta_max", s.beta_max},
          {"sweeps", s.sweeps},
          {"reads", s.reads},
          {"interpolation", to_string(s.interpolation)},
          {"seed", s.seed}};
}

inline nlohmann::json sample_to_json(const Sample& s) {
  return {{"bits", bits_to_string(s.bits)}, {"energy", s.energy}, {"occurrences", s.occurrences}};
}

/// {"qubo_digest","schedule":{...},"samples":[{"bits","energy","occurrences"}]}
inline nlohmann::json sampleset_to_json(const SampleSet& set) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : set.samples) samples.push_back(sample_to_json(s));
  return {{"qubo_digest", set.qubo_digest},
          {"schedule", schedule_to_json(set.schedule)},
          {"samples", samples}};
}

}  // namespace rinq
