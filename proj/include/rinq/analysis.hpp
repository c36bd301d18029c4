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

// Agreement between QUBO selections and classical rankings, and the
// end-to-end pipeline that produces them.

#include <algorithm>
#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rinq/annealer.hpp"
#include "rinq/centrality.hpp"
#include "rinq/error.hpp"
#include "rinq/pdb.hpp"
#include "rinq/qubo.hpp"
#include "rinq/rin.hpp"

namespace rinq {

using NodeSet = std::set<std::size_t>;

/// |A ∩ B| / |A ∪ B|.
inline double jaccard(const NodeSet& a, const NodeSet& b) {
  if (a.empty() && b.empty()) throw UsageError("Jaccard index of two empty sets is undefined");
  std::size_t common = 0;
  for (auto v : a) common += b.count(v);
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

template <class Range>
NodeSet to_set(const Range& r) {
  return NodeSet(std::begin(r), std::end(r));
}

inline CentralityMeasure measure_of(QuboFormulation f) {
  return f == QuboFormulation::estrada ? CentralityMeasure::estrada : CentralityMeasure::eigenvector;
}

inline QuboFormulation default_formulation(CentralityMeasure m) {
  return m == CentralityMeasure::estrada ? QuboFormulation::estrada
                                         : QuboFormulation::eigenvector_mixed;
}

namespace detail {

// Relabels library errors with the pipeline stage; usage errors pass through
// untouched so callers can still tell them apart.
template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace detail

struct SweepLevel {
  std::size_t tau = 0;
  std::vector<std::size_t> selected;  // ascending
  double energy = 0.0;
};

struct SweepResult {
  std::vector<std::size_t> ranking;  // ranking[k] is the rank-(k+1) node
  std::vector<SweepLevel> levels;
  std::vector<std::string> warnings;
};

/// Ranks nodes by the level at which they first enter the selection. When a
/// level adds more than one new node (non-nested solutions) the level is
/// flagged and the classical score decides which not-yet-ranked node takes
/// the rank.
inline SweepResult rank_sweep_levels(std::vector<SweepLevel> levels, std::span<const double> classical) {
  SweepResult out;
  NodeSet ranked;
  NodeSet previous;
  for (const auto& level : levels) {
    std::size_t fresh = 0;
    for (auto v : level.selected) fresh += previous.count(v) ? 0 : 1;
    if (fresh != 1 || previous.size() + 1 != level.selected.size())
      out.warnings.push_back("non-nested sweep at tau=" + std::to_string(level.tau));

    std::vector<std::size_t> candidates;
    for (auto v : level.selected)
      if (!ranked.count(v)) candidates.push_back(v);
    if (candidates.empty())
      throw SweepError(static_cast<int>(level.tau),
                       "tau=" + std::to_string(level.tau) + " selects no unranked node");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t x, std::size_t y) { return classical[x] > classical[y]; });
    out.ranking.push_back(candidates.front());
    ranked.insert(candidates.front());
    previous = to_set(level.selected);
  }
  out.levels = std::move(levels);
  return out;
}

/// Solves the QUBO for tau = 1..tau_max and ranks nodes with rank_sweep_levels.
inline SweepResult tau_sweep_ranking(const AdjacencyMatrix& a, QuboFormulation formulation,
                                     std::size_t tau_max, const AnnealSchedule& schedule,
                                     std::optional<Penalties> penalties = std::nullopt,
                                     unsigned threads = 0) {
  const std::size_t n = a.size();
  check_tau(n, tau_max);
  const Penalties pen = penalties.value_or(default_penalties(n, formulation));
  const auto classical = compute_centrality(a, measure_of(formulation));

  std::vector<SweepLevel> levels;
  for (std::size_t tau = 1; tau <= tau_max; ++tau) {
    const auto q = build_qubo(a, formulation, tau, pen);
    const auto best = filter_valid(anneal(q, schedule, threads), tau);
    if (!best)
      throw SweepError(static_cast<int>(tau),
                       "no valid sample at tau=" + std::to_string(tau) + " in tau sweep");
    levels.push_back({tau, selected_indices(best->bits), best->energy});
  }
  return rank_sweep_levels(std::move(levels), classical.values);
}

struct StructureSource {
  std::string pdb_id;
  std::string text;
};

struct RunParameters {
  CentralityMeasure measure = CentralityMeasure::eigenvector;
  std::optional<QuboFormulation> formulation;  // defaults per measure
  std::size_t tau = 5;
  double cutoff = kDefaultCutoff;
  std::optional<char> chain;
  int model = 1;
  std::optional<double> p0;
  std::optional<double> p1;
  AnnealSchedule schedule;
  unsigned threads = 0;

  QuboFormulation effective_formulation() const {
    return formulation.value_or(default_formulation(measure));
  }
};

struct RankedNode {
  std::size_t index = 0;
  ResidueRecord residue;
  double score = 0.0;
};

struct QuboSelection {
  std::vector<std::size_t> indices;  // ascending
  std::vector<ResidueRecord> residues;
  BitVector bits;
  double energy = 0.0;
};

struct AnalysisReport {
  std::string pdb_id;
  std::size_t n = 0;
  std::size_t edge_count = 0;
  double cutoff = kDefaultCutoff;
  CentralityMeasure measure = CentralityMeasure::eigenvector;
  QuboFormulation formulation = QuboFormulation::eigenvector_mixed;
  std::size_t tau = 0;
  Penalties penalties;
  std::vector<RankedNode> classical_top;
  std::optional<QuboSelection> qubo_top;
  std::optional<double> jaccard;
  AnnealSchedule schedule;
  std::string qubo_digest;
  std::size_t valid_reads = 0;
  std::vector<std::string> warnings;
};

/// Parse -> C-alpha extraction -> network -> classical scores -> QUBO ->
/// anneal -> tau filter -> Jaccard. Failures carry the stage name.
inline AnalysisReport compare_run(const StructureSource& source, const RunParameters& params) {
  AnalysisReport r;
  const auto models = detail::in_stage("ingest", [&] { return parse_pdb(source.text); });
  const auto& model = detail::in_stage("ingest", [&]() -> const StructureModel& {
    return select_model(models, params.model);
  });
  r.pdb_id = !source.pdb_id.empty() ? source.pdb_id : model.pdb_id;
  auto residues = extract_ca(model, params.chain);
  if (residues.empty())
    throw StageError("extract", "no C-alpha atoms" +
                                    (params.chain ? " in chain " + std::string(1, *params.chain)
                                                  : std::string()));

  const auto graph =
      detail::in_stage("rin", [&] { return build_rin(std::move(residues), params.cutoff, r.pdb_id); });
  const auto a = adjacency(graph);
  r.n = graph.size();
  r.edge_count = graph.edges.size();
  r.cutoff = graph.cutoff;
  r.warnings = graph.warnings;
  r.measure = params.measure;
  r.formulation = params.effective_formulation();
  if (measure_of(r.formulation) != r.measure)
    throw UsageError("formulation " + to_string(r.formulation) + " does not match measure " +
                     to_string(r.measure));
  r.tau = params.tau;
  check_tau(r.n, r.tau);
  const auto defaults = default_penalties(r.n, r.formulation);
  r.penalties = {params.p0.value_or(defaults.p0), params.p1.value_or(defaults.p1)};
  r.schedule = params.schedule;

  const auto scores = detail::in_stage("centrality", [&] { return compute_centrality(a, r.measure); });
  for (const auto& w : scores.warnings) r.warnings.push_back(w);
  for (auto i : top_tau(scores, r.tau)) r.classical_top.push_back({i, graph.nodes[i], scores.values[i]});

  const auto q = detail::in_stage("qubo", [&] { return build_qubo(a, r.formulation, r.tau, r.penalties); });
  const auto samples = detail::in_stage("anneal", [&] { return anneal(q, r.schedule, params.threads); });
  r.qubo_digest = samples.qubo_digest;
  r.valid_reads = valid_read_count(samples, r.tau);

  if (const auto best = filter_valid(samples, r.tau)) {
    QuboSelection sel;
    sel.indices = selected_indices(best->bits);
    for (auto i : sel.indices) sel.residues.push_back(graph.nodes[i]);
    sel.bits = best->bits;
    sel.energy = best->energy;
    NodeSet classical;
    for (const auto& c : r.classical_top) classical.insert(c.index);
    r.jaccard = jaccard(classical, to_set(sel.indices));
    r.qubo_top = std::move(sel);
  } else {
    r.warnings.push_back("no valid sample: no read selected exactly " + std::to_string(r.tau) +
                         " residues");
  }
  return r;
}

inline nlohmann::json residue_to_json(std::size_t index, const ResidueRecord& res) {
  nlohmann::json j{{"index", index},
                   {"chain", std::string(1, res.chain_id())},
                   {"res_seq", res.res_seq()},
                   {"res_name", res.res_name},
                   {"label", res.label()}};
  if (res.id.insertion_code) j["insertion_code"] = std::string(1, *res.id.insertion_code);
  return j;
}

/// Canonical JSON: objects are key-sorted, so equal reports serialize to equal bytes.
inline nlohmann::json report_to_json(const AnalysisReport& r) {
  nlohmann::json classical = nlohmann::json::array();
  for (const auto& c : r.classical_top) {
    auto j = residue_to_json(c.index, c.residue);
    j["score"] = c.score;
    classical.push_back(std::move(j));
  }
  nlohmann::json qubo = nullptr;
  if (r.qubo_top) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < r.qubo_top->indices.size(); ++k)
      nodes.push_back(residue_to_json(r.qubo_top->indices[k], r.qubo_top->residues[k]));
    qubo = {{"nodes", nodes},
            {"bits", bits_to_string(r.qubo_top->bits)},
            {"energy", r.qubo_top->energy}};
  }
  return {{"pdb_id", r.pdb_id},
          {"n", r.n},
          {"edge_count", r.edge_count},
          {"cutoff", r.cutoff},
          {"measure", to_string(r.measure)},
          {"formulation", to_string(r.formulation)},
          {"tau", r.tau},
          {"p0", r.penalties.p0},
          {"p1", r.penalties.p1},
          {"classical_top", classical},
          {"qubo_top", qubo},
          {"jaccard", r.jaccard ? nlohmann::json(*r.jaccard) : nlohmann::json(nullptr)},
          {"schedule", schedule_to_json(r.schedule)},
          {"qubo_digest", r.qubo_digest},
          {"valid_reads", r.valid_reads},
          {"warnings", r.warnings}};
}

namespace detail {

inline std::string join_res_seq(const std::vector<ResidueRecord>& rs, const char* sep = ", ") {
  std::string s;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(rs[k].res_seq());
    if (rs[k].id.insertion_code) s += *rs[k].id.insertion_code;
  }
  return s;
}

inline std::vector<ResidueRecord> classical_residues(const AnalysisReport& r) {
  std::vector<ResidueRecord> out;
  for (const auto& c : r.classical_top) out.push_back(c.residue);
  return out;
}

}  // namespace detail

/// Human-readable table: one row per protein, residues by sequence number.
inline std::string report_to_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "protein " << r.pdb_id << "  n=" << r.n << "  edges=" << r.edge_count
      << "  cutoff=" << r.cutoff << " A\n";
  out << "measure " << to_string(r.measure) << "  formulation " << to_string(r.formulation)
      << "  tau=" << r.tau << "  p0=" << r.penalties.p0 << "  p1=" << r.penalties.p1 << "\n";
  out << "schedule beta " << r.schedule.beta_min << ".." << r.schedule.beta_max << " ("
      << to_string(r.schedule.interpolation) << ")  sweeps=" << r.schedule.sweeps
      << "  reads=" << r.schedule.reads << "  seed=" << r.schedule.seed << "\n\n";
  out << std::left << std::setw(10) << "Protein" << std::setw(28)
      << ("Classical " + to_string(r.measure)) << std::setw(28) << "QUBO selection"
      << "Jaccard\n";
  out << std::setw(10) << r.pdb_id << std::setw(28)
      << detail::join_res_seq(detail::classical_residues(r)) << std::setw(28)
      << (r.qubo_top ? detail::join_res_seq(r.qubo_top->residues) : std::string("(no valid sample)"));
  if (r.jaccard) {
    std::ostringstream j;
    j << std::fixed << std::setprecision(3) << *r.jaccard;
    out << j.str();
  } else {
    out << "-";
  }
  out << "\n";
  if (r.qubo_top) {
    std::ostringstream e;
    e.precision(17);
    e << r.qubo_top->energy;
    out << "\nbest valid sample " << bits_to_string(r.qubo_top->bits) << "  energy " << e.str()
        << "  valid reads " << r.valid_reads << "/" << r.schedule.reads << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Corpus mode

struct CorpusEntry {
  std::string pdb_id;
  RunParameters params;
};

/// Manifest: one PDB id per line, optionally followed by key=value overrides
/// (tau, measure, formulation, chain, model, cutoff, p0, p1, reads, sweeps,
/// seed). '#' starts a comment.
inline std::vector<CorpusEntry> parse_manifest(const std::string& text, const RunParameters& defaults) {
  std::vector<CorpusEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string id;
    if (!(words >> id)) continue;
    CorpusEntry e{id, defaults};
    std::string kv;
    while (words >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      try {
        if (key == "tau") e.params.tau = std::stoul(value);
        else if (key == "measure") e.params.measure = parse_measure(value);
        else if (key == "formulation") e.params.formulation = parse_formulation(value);
        else if (key == "chain" && value.size() == 1) e.params.chain = value[0];
        else if (key == "model") e.params.model = std::stoi(value);
        else if (key == "cutoff") e.params.cutoff = std::stod(value);
        else if (key == "p0") e.params.p0 = std::stod(value);
        else if (key == "p1") e.params.p1 = std::stod(value);
        else if (key == "reads") e.params.schedule.reads = std::stoul(value);
        else if (key == "sweeps") e.params.schedule.sweeps = std::stoul(value);
        else if (key == "seed") e.params.schedule.seed = std::stoull(value);
        else throw ParseError(line_no, "unknown manifest key '" + key + "'");
      } catch (const std::logic_error&) {
        throw ParseError(line_no, "bad value for '" + key + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

struct CorpusRow {
  std::string pdb_id;
  std::optional<AnalysisReport> report;
  std::string status;  // "ok", "no-valid-sample", or "error: ..."
};

using StructureResolver = std::function<StructureSource(const std::string&)>;

/// Runs compare_run for each entry in manifest order. Failures become rows
/// with an error status rather than aborting the corpus.
inline std::vector<CorpusRow> run_corpus(const std::vector<CorpusEntry>& entries,
                                         const StructureResolver& resolve) {
  std::vector<CorpusRow> rows;
  for (const auto& e : entries) {
    CorpusRow row{e.pdb_id, std::nullopt, "ok"};
    try {
      const auto source = detail::in_stage("fetch", [&] { return resolve(e.pdb_id); });
      row.report = compare_run(source, e.params);
      if (!row.report->qubo_top) row.status = "no-valid-sample";
    } catch (const std::exception& ex) {
      row.status = std::string("error: ") + ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace detail

/// pdb_id,n,edges,measure,tau,classical_top,qubo_top,jaccard,energy,status
inline std::string corpus_to_csv(const std::vector<CorpusRow>& rows) {
  std::ostringstream out;
  out << "pdb_id,n,edges,measure,tau,classical_top,qubo_top,jaccard,energy,status\n";
  for (const auto& row : rows) {
    out << detail::csv_field(row.pdb_id) << ',';
    if (row.report) {
      const auto& r = *row.report;
      out << r.n << ',' << r.edge_count << ',' << to_string(r.measure) << ',' << r.tau << ','
          << detail::join_res_seq(detail::classical_residues(r), " ") << ',';
      if (r.qubo_top) {
        std::ostringstream j, e;
        j << std::fixed << std::setprecision(3) << *r.jaccard;
        e.precision(17);
        e << r.qubo_top->energy;
        out << detail::join_res_seq(r.qubo_top->residues, " ") << ',' << j.str() << ',' << e.str();
      } else {
        out << ",,";
      }
    } else {
      out << ",,,,,,,";
    }
    out << ',' << detail::csv_field(row.status) << '\n';
  }
  return out.str();
}

}  // namespace rinq
