// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/evaluation.hpp"
#include "covert/graph.hpp"
#include "covert/mle.hpp"
#include "covert/ranking.hpp"
#include "covert/synthesis.hpp"
#include "covert/transmission.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covert {

/// Which nodes to hide: explicit labels, the highest-degree node ("hub") or
/// the lowest-degree node ("peripheral"); degree ties go to the lowest index.
struct CovertSelection {
  enum class Kind { kLabels, kHub, kPeripheral };
  Kind kind = Kind::kHub;
  std::vector<std::string> labels;
};

/// Parses "hub", "peripheral" or a comma separated label list.
CovertSelection parse_covert_selection(std::string_view text);
std::string to_string(const CovertSelection& sel);

/// Resolves the selection against a graph. Throws std::invalid_argument for
/// unknown labels or when the set would be empty or cover every node.
std::vector<NodeIndex> select_covert(const Graph& g, const CovertSelection& sel);

struct MethodSpec {
  enum class Kind { kMle, kHeuristic };
  Kind kind = Kind::kMle;
  std::size_t clusters = 0;  // heuristic only; 0 means "use the config default"

  /// File-name id: "mle", "heuristic" or "heuristic-<C>" for an explicit C.
  std::string name() const;
};

/// Parses "mle", "heuristic" or "heuristic:<C>".
MethodSpec parse_method(std::string_view text);

struct ExperimentConfig {
  // Network source: an edge list when set, otherwise synthesis (whose seed is
  // replaced by each run seed).
  std::optional<std::filesystem::path> edge_list;
  std::optional<std::filesystem::path> cluster_file;
  SynthesisConfig synthesis;

  CovertSelection covert;
  std::size_t log_count = 100;
  std::vector<MethodSpec> methods{{MethodSpec::Kind::kMle, 0}, {MethodSpec::Kind::kHeuristic, 0}};
  std::size_t heuristic_clusters = 5;
  FitConfig fit;
  std::vector<std::uint64_t> seeds = default_seeds();
  std::size_t threads = 1;

  static std::vector<std::uint64_t> default_seeds();
};

// Flat key-value schema shared by config files, the manifest and the CLI
// flags (a flag `--key value` overrides `key = value`):
//
//   edges, cluster-file      network from files (empty edges = synthesize)
//   nodes, clusters, eta, min-links, max-links, initial-edges
//   covert                   hub | peripheral | label[,label...]
//   logs                     D
//   methods                  comma list of mle | heuristic | heuristic:<C>
//   heuristic-clusters       C used by a plain "heuristic"
//   optimizer                natural | plain (search direction of the fit)
//   learning-rate, max-iters, tol, eps
//   seeds                    comma list of integers or a-b ranges
//   threads

/// Applies one key. Throws std::invalid_argument for unknown keys or bad values.
void set_option(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// Reads `key = value` lines ('#' starts a comment line) on top of defaults.
ExperimentConfig read_experiment_config(const std::filesystem::path& path);
/// Every key with its current value, one `key = value` line each, in schema order.
std::string format_experiment_config(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

/// Everything produced for one seed.
struct SeedRun {
  std::uint64_t seed = 0;
  Graph graph{1, {}};
  std::vector<NodeIndex> covert;
  std::optional<LogDataset> dataset;
  std::size_t targets = 0;
  bool skipped = false;                // no target logs for this seed
  std::vector<RankingResult> rankings;  // per method, empty when skipped
  std::vector<EvalCurves> curves;       // per method, empty when skipped
};

struct ExperimentResult {
  std::vector<MethodSpec> methods;
  std::vector<SeedRun> runs;             // in seed-list order
  std::vector<CurveSummary> summaries;   // per method, over non-skipped seeds
  std::size_t skipped_seeds = 0;
};

/// The graph a seed works on: the configured edge list, or a synthesized
/// network seeded with `seed`.
Graph build_graph(const ExperimentConfig& cfg, std::uint64_t seed);

/// cfg.log_count patterns drawn under theta_from_graph(g), with the covert
/// nodes removed. Patterns use derive_seed(seed, 1).
LogDataset generate_dataset(const ExperimentConfig& cfg, const Graph& g, std::span<const NodeIndex> covert,
                            std::uint64_t seed);

/// Ranks with one method. k-medoids uses derive_seed(seed, 2); the MLE fit is
/// deterministic and is copied into *fit_out when requested.
RankingResult rank_logs(const ExperimentConfig& cfg, const MethodSpec& method, const LogDataset& ds,
                        std::uint64_t seed, FitResult* fit_out = nullptr);

/// Runs the pipeline for one seed: build or load the network, pick the covert
/// set, generate and project D patterns, then rank and evaluate with every
/// method. Pattern and clustering streams are derived from the seed.
SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::optional<Graph>& loaded);

/// Runs every seed (optionally on several threads; results are assembled in
/// seed order so output does not depend on scheduling) and aggregates mean and
/// standard-deviation curves. Throws StateError if every seed was skipped.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the experiment outputs under `out_dir`:
///   manifest.txt, plot.gp, curves-<method>.csv, curves-<method>-sd.csv and
///   per seed seed-<s>/{graph.edges, graph.clusters, logs.txt, patterns.txt,
///   ranking-<method>.csv, curves-<method>.csv}.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const std::filesystem::path& out_dir);

/// Short human-readable summary (peak F per method, targets, skipped seeds).
std::string describe(const ExperimentResult& result);

}  // namespace covert
