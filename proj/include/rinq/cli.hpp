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

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 pipeline
// error, 3 no sample satisfied the cardinality constraint.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rinq/analysis.hpp"
#include "rinq/annealer.hpp"
#include "rinq/centrality.hpp"
#include "rinq/error.hpp"
#include "rinq/fetch.hpp"
#include "rinq/pdb.hpp"
#include "rinq/qubo.hpp"
#include "rinq/rin.hpp"

namespace rinq::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kPipeline = 2, kNoValidSample = 3 };

inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("RINQ_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "rinq";
  return ".rinq-cache";
}

/// Directory of structures shipped with the build, consulted after the cache
/// and before the network. RINQ_BUNDLED_PDB overrides the compiled-in path.
inline std::optional<std::filesystem::path> bundled_pdb_dir() {
  if (const char* env = std::getenv("RINQ_BUNDLED_PDB")) {
    if (*env) return std::filesystem::path(env);
    return std::nullopt;
  }
#ifdef RINQ_BUNDLED_PDB_DIR
  return std::filesystem::path(RINQ_BUNDLED_PDB_DIR);
#else
  return std::nullopt;
#endif
}

/// A path to an existing file is read directly; anything else must be a PDB
/// id, looked up in the cache, then the bundled structures, then the mirror.
inline StructureSource resolve_input(const std::string& arg, const std::filesystem::path& cache_dir) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(arg)) {
    StructureSource s{{}, rinq::detail::in_stage("ingest", [&] { return read_file(arg); })};
    std::string stem = fs::path(arg).stem().string();
    if (is_valid_pdb_id(stem)) s.pdb_id = normalize_pdb_id(stem);
    return s;
  }
  if (is_valid_pdb_id(arg)) {
    const std::string id = normalize_pdb_id(arg);
    const auto bundled = bundled_pdb_dir();
    if (!fs::exists(cache_path(cache_dir, id)) && bundled && fs::is_regular_file(*bundled / (id + ".pdb")))
      return {id, rinq::detail::in_stage("ingest", [&] { return read_file(*bundled / (id + ".pdb")); })};
    return {id, rinq::detail::in_stage("fetch", [&] { return fetch_pdb(id, cache_dir); })};
  }
  throw StageError("ingest", "file not found: " + arg);
}

struct Options {
  std::string input;
  std::string cache_dir;
  std::string format;
  std::string output;
  std::string chain;
  int model = 1;
  double cutoff = kDefaultCutoff;
  std::string measure = "eigenvector";
  std::string formulation;
  std::size_t tau = 5;
  std::optional<double> p0;
  std::optional<double> p1;
  AnnealSchedule schedule;
  std::string interpolation = "geometric";
  unsigned threads = 0;
  std::string scores;
  bool emit_samples = false;
};

namespace detail {

inline void add_structure_options(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "PDB id or path to a PDB file")->required();
  cmd->add_option("--chain", o.chain, "restrict to one chain id");
  cmd->add_option("--model", o.model, "model number (default 1)");
  cmd->add_option("--cutoff", o.cutoff, "contact cutoff in Angstrom (default 8.0)");
}

inline void add_solver_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--measure", o.measure, "eigenvector|estrada");
  cmd->add_option("--formulation", o.formulation,
                  "eigenvector QUBO form: mixed (default), simple, simple-single, cubic");
  cmd->add_option("--tau", o.tau, "number of residues to select (default 5)");
  cmd->add_option("--p0", o.p0, "centrality weight (default 1/sqrt(n))");
  cmd->add_option("--p1", o.p1, "constraint weight (default 10 n, 50 n for estrada)");
  cmd->add_option("--reads", o.schedule.reads, "annealing reads (default 10000)");
  cmd->add_option("--sweeps", o.schedule.sweeps, "sweeps per read (default 1000)");
  cmd->add_option("--beta-min", o.schedule.beta_min, "initial inverse temperature (default 0.1)");
  cmd->add_option("--beta-max", o.schedule.beta_max, "final inverse temperature (default 4.0)");
  cmd->add_option("--schedule", o.interpolation, "geometric|linear");
  cmd->add_option("--seed", o.schedule.seed, "master RNG seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

inline RunParameters run_parameters(const Options& o) {
  RunParameters p;
  p.measure = parse_measure(o.measure);
  if (!o.formulation.empty()) p.formulation = parse_formulation(o.formulation);
  p.tau = o.tau;
  p.cutoff = o.cutoff;
  if (!o.chain.empty()) {
    if (o.chain.size() != 1) throw UsageError("--chain takes a single character");
    p.chain = o.chain[0];
  }
  p.model = o.model;
  p.p0 = o.p0;
  p.p1 = o.p1;
  p.schedule = o.schedule;
  p.schedule.interpolation = parse_interpolation(o.interpolation);
  p.schedule.validate();
  p.threads = o.threads;
  return p;
}

struct Loaded {
  ResidueGraph graph;
  AdjacencyMatrix a;
};

inline Loaded load_graph(const Options& o, const RunParameters& p) {
  const auto source = resolve_input(o.input, o.cache_dir);
  const auto models = rinq::detail::in_stage("ingest", [&] { return parse_pdb(source.text); });
  const auto& model = select_model(models, p.model);
  auto residues = extract_ca(model, p.chain);
  if (residues.empty()) throw StageError("extract", "no C-alpha atoms found");
  const std::string id = !source.pdb_id.empty() ? source.pdb_id : model.pdb_id;
  auto graph = rinq::detail::in_stage("rin", [&] { return build_rin(std::move(residues), p.cutoff, id); });
  auto a = adjacency(graph);
  return {std::move(graph), std::move(a)};
}

inline nlohmann::json solve_to_json(const ResidueGraph& g, const QuboMatrix& q,
                                    const SampleSet& samples, const std::optional<Sample>& best,
                                    bool emit_samples) {
  nlohmann::json j{{"pdb_id", g.pdb_id},
                   {"n", g.size()},
                   {"edge_count", g.edges.size()},
                   {"measure", to_string(measure_of(q.formulation))},
                   {"formulation", to_string(q.formulation)},
                   {"tau", q.tau},
                   {"p0", q.p0},
                   {"p1", q.p1},
                   {"schedule", schedule_to_json(samples.schedule)},
                   {"qubo_digest", samples.qubo_digest},
                   {"valid_reads", valid_read_count(samples, q.tau)},
                   {"best", nullptr}};
  if (best) {
    nlohmann::json nodes = nlohmann::json::array();
    for (auto i : selected_indices(best->bits)) nodes.push_back(residue_to_json(i, g.nodes[i]));
    j["best"] = {{"bits", bits_to_string(best->bits)}, {"energy", best->energy}, {"nodes", nodes}};
  }
  if (emit_samples) j["samples"] = sampleset_to_json(samples)["samples"];
  return j;
}

}  // namespace detail

/// Runs one command line. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rinq: top-tau central residues of protein contact networks via QUBO annealing"};
  app.require_subcommand(1);
  Options o;
  o.cache_dir = default_cache_dir().string();

  auto* fetch = app.add_subcommand("fetch", "download a structure into the cache");
  fetch->add_option("id", o.input, "PDB id")->required();

  auto* graph = app.add_subcommand("graph", "emit the residue interaction network");
  detail::add_structure_options(graph, o);
  graph->add_option("--scores", o.scores, "attach eigenvector|estrada scores to nodes");

  auto* centrality = app.add_subcommand("centrality", "emit classical centrality scores");
  detail::add_structure_options(centrality, o);
  centrality->add_option("--measure", o.measure, "eigenvector|estrada");

  auto* solve = app.add_subcommand("solve", "anneal the QUBO and emit the best valid sample");
  detail::add_structure_options(solve, o);
  detail::add_solver_options(solve, o);
  solve->add_flag("--samples", o.emit_samples, "include the full sample spectrum");

  auto* compare = app.add_subcommand("compare", "full pipeline with classical agreement report");
  detail::add_structure_options(compare, o);
  detail::add_solver_options(compare, o);

  auto* corpus = app.add_subcommand("corpus", "run compare over a manifest of PDB ids");
  corpus->add_option("manifest", o.input, "manifest file")->required();
  detail::add_solver_options(corpus, o);
  corpus->add_option("--cutoff", o.cutoff, "contact cutoff in Angstrom (default 8.0)");

  for (auto* cmd : {fetch, graph, centrality, solve, compare, corpus}) {
    cmd->add_option("--cache-dir", o.cache_dir, "structure cache (env RINQ_CACHE_DIR)");
    cmd->add_option("--format", o.format, "output format: json|csv|dot|graphml|text");
    cmd->add_option("-o,--output", o.output, "write to a file instead of stdout");
  }

  std::vector<std::string> argv_storage{"rinq"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::ostringstream buffer;
  int status = kOk;
  auto fail = [&](const std::string& stage, const std::string& msg, int code) {
    err << "rinq: " << (stage.empty() ? std::string() : "[" + stage + "] ") << msg << "\n";
    return code;
  };

  try {
    const auto params = [&] {
      return detail::run_parameters(o);
    };
    if (fetch->parsed()) {
      const std::string id = normalize_pdb_id(o.input);
      const auto text = rinq::detail::in_stage("fetch", [&] { return fetch_pdb(id, o.cache_dir); });
      buffer << (std::filesystem::path(o.cache_dir) / (id + ".pdb")).string() << "\n";
      (void)text;
    } else if (graph->parsed()) {
      const auto p = params();
      const auto loaded = detail::load_graph(o, p);
      const auto format = parse_graph_format(o.format.empty() ? "json" : o.format);
      std::optional<CentralityScores> scores;
      if (!o.scores.empty())
        scores = rinq::detail::in_stage("centrality", [&] {
          return compute_centrality(loaded.a, parse_measure(o.scores));
        });
      buffer << export_graph(loaded.graph, format, scores ? &scores->values : nullptr);
    } else if (centrality->parsed()) {
      const auto p = params();
      const auto loaded = detail::load_graph(o, p);
      const auto scores = rinq::detail::in_stage("centrality", [&] {
        return compute_centrality(loaded.a, p.measure);
      });
      const std::string format = o.format.empty() ? "csv" : o.format;
      if (format == "csv") buffer << scores_to_csv(loaded.graph, scores);
      else if (format == "json") buffer << scores_to_json(loaded.graph, scores).dump(2) << "\n";
      else throw UsageError("centrality supports csv|json, not '" + format + "'");
    } else if (solve->parsed()) {
      const auto p = params();
      const auto loaded = detail::load_graph(o, p);
      const auto f = p.effective_formulation();
      if (measure_of(f) != p.measure)
        throw UsageError("formulation " + to_string(f) + " does not match measure " + to_string(p.measure));
      const auto defaults = default_penalties(loaded.graph.size(), f);
      const Penalties pen{p.p0.value_or(defaults.p0), p.p1.value_or(defaults.p1)};
      const auto q = rinq::detail::in_stage("qubo", [&] { return build_qubo(loaded.a, f, p.tau, pen); });
      const auto samples = rinq::detail::in_stage("anneal", [&] { return anneal(q, p.schedule, p.threads); });
      const auto best = filter_valid(samples, p.tau);
      const std::string format = o.format.empty() ? "json" : o.format;
      if (format == "json") {
        buffer << detail::solve_to_json(loaded.graph, q, samples, best, o.emit_samples).dump(2) << "\n";
      } else if (format == "text") {
        if (best) {
          std::ostringstream e;
          e.precision(17);
          e << best->energy;
          buffer << "best valid sample " << bits_to_string(best->bits) << "\nenergy " << e.str()
                 << "\ntop nodes:";
          for (auto i : selected_indices(best->bits)) buffer << ' ' << loaded.graph.nodes[i].label();
          buffer << "\n";
        } else {
          buffer << "no valid sample\n";
        }
      } else {
        throw UsageError("solve supports json|text, not '" + format + "'");
      }
      if (!best) status = kNoValidSample;
    } else if (compare->parsed()) {
      const auto p = params();
      const auto source = resolve_input(o.input, o.cache_dir);
      const auto report = compare_run(source, p);
      const std::string format = o.format.empty() ? "json" : o.format;
      if (format == "json") buffer << report_to_json(report).dump(2) << "\n";
      else if (format == "text") buffer << report_to_text(report);
      else throw UsageError("compare supports json|text, not '" + format + "'");
      if (!report.qubo_top) status = kNoValidSample;
    } else if (corpus->parsed()) {
      if (!o.format.empty() && o.format != "csv") throw UsageError("corpus emits csv only");
      const auto p = params();
      const auto manifest = rinq::detail::in_stage("ingest", [&] { return read_file(o.input); });
      const auto entries = rinq::detail::in_stage("ingest", [&] { return parse_manifest(manifest, p); });
      const std::filesystem::path base = std::filesystem::path(o.input).parent_path();
      const auto rows = run_corpus(entries, [&](const std::string& id) {
        // Local structures next to the manifest take precedence over the cache.
        for (const auto& local : {base / id, base / (id + ".pdb"), base / "pdb" / (id + ".pdb")})
          if (std::filesystem::is_regular_file(local)) return resolve_input(local.string(), o.cache_dir);
        return resolve_input(id, o.cache_dir);
      });
      buffer << corpus_to_csv(rows);
    }
  } catch (const UsageError& e) {
    return fail("", e.what(), kUsage);
  } catch (const StageError& e) {
    return fail("", e.what(), kPipeline);
  } catch (const Error& e) {
    return fail("pipeline", e.what(), kPipeline);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kPipeline);
  }

  if (!o.output.empty()) {
    std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
    if (!file) return fail("output", "cannot write '" + o.output + "'", kPipeline);
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  if (status == kNoValidSample) err << "rinq: [filter] no valid sample\n";
  return status;
}

}  // namespace rinq::cli
