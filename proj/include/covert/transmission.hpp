// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covert {

/// Hub-and-spoke model parameters over n nodes: initiation probabilities f and
/// transmission probabilities r (row-major n x n, r(j,k) is initiator j reaching
/// responder k; the diagonal is not a parameter and is kept at 0).
///
/// Only the box constraint 0 <= r <= 1 and the simplex constraint on f are
/// enforced. A per-initiator bound on sum_k r(j,k) is not: hubs in the
/// link-indicator model exceed it by construction.
struct Theta {
  std::vector<double> initiation;
  std::vector<double> transmission;

  Theta() = default;
  /// Uniform f, zero r.
  explicit Theta(std::size_t n);

  std::size_t size() const { return initiation.size(); }
  double f(NodeIndex j) const { return initiation[j]; }
  double r(NodeIndex j, NodeIndex k) const { return transmission[j * size() + k]; }
  double& r(NodeIndex j, NodeIndex k) { return transmission[j * size() + k]; }
};

/// Throws std::invalid_argument unless sizes agree, f >= 0 with |sum f - 1| <=
/// 1e-9, and every off-diagonal r lies in [0, 1].
void validate(const Theta& theta);

/// f = 1/M everywhere, r(j,k) = r(k,j) = 1 on links and 0 elsewhere.
Theta theta_from_graph(const Graph& g);

/// One collaborative activity: the initiator plus the responders it reached.
struct ActivityPattern {
  NodeIndex initiator = 0;
  std::vector<NodeIndex> members;  // sorted, contains initiator
};

/// Draws `count` independent patterns: initiator ~ f, then every other node k
/// joins independently with probability r(initiator, k).
std::vector<ActivityPattern> generate_patterns(const Theta& theta, std::size_t count,
                                               std::uint64_t seed);

/// Surveillance logs over the overt nodes, indexed densely 0..N-1.
///
/// Row i is the log d_i as a sorted list of overt indices; `contains(i, j)` is
/// the binary matrix view d_ij. When the dataset was produced by projection,
/// it also carries the ground truth: the full node labels, the overt-to-source
/// index map and the original activity patterns (indexed in the full node set).
class LogDataset {
 public:
  struct GroundTruth {
    std::vector<std::string> node_labels;      // all M nodes
    std::vector<NodeIndex> overt_source;       // overt index -> index in node_labels
    std::vector<ActivityPattern> patterns;     // parallel to the logs
  };

  LogDataset(std::vector<std::string> overt_labels, std::vector<std::vector<NodeIndex>> logs,
             std::optional<GroundTruth> truth = std::nullopt);

  std::size_t log_count() const { return logs_.size(); }
  std::size_t node_count() const { return labels_.size(); }

  std::span<const NodeIndex> log(std::size_t i) const { return logs_.at(i); }
  bool contains(std::size_t i, NodeIndex j) const { return matrix_[i * node_count() + j] != 0; }
  /// Row-major D x N 0/1 matrix.
  std::span<const std::uint8_t> matrix() const { return matrix_; }

  const std::string& label(NodeIndex j) const { return labels_.at(j); }
  std::span<const std::string> labels() const { return labels_; }

  /// Number of logs in which overt node j appears.
  std::size_t appearances(NodeIndex j) const { return appearances_.at(j); }

  bool has_ground_truth() const { return truth_.has_value(); }
  /// Throws StateError when the dataset has no ground truth.
  const GroundTruth& ground_truth() const;
  /// True when log i lost at least one covert member (d_i != delta_i).
  bool is_target(std::size_t i) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<NodeIndex>> logs_;
  std::vector<std::uint8_t> matrix_;
  std::vector<std::size_t> appearances_;
  std::optional<GroundTruth> truth_;
};

/// Deletes the covert nodes from every pattern. Overt nodes keep their relative
/// order and are re-indexed densely; empty logs are kept.
LogDataset project_logs(std::span<const ActivityPattern> patterns, std::span<const NodeIndex> covert,
                        std::span<const std::string> node_labels);

/// Number of target logs D_t. Throws StateError without ground truth.
std::size_t count_targets(const LogDataset& ds);

// Dataset files: a `# nodes: <overt labels>` header, then one log per line as
// space separated labels (an empty line is an empty log). The ground-truth file
// has the same layout with every node label in the header and one pattern per
// line, initiator first.

LogDataset read_dataset(const std::filesystem::path& logs,
                        const std::optional<std::filesystem::path>& truth = std::nullopt);
void write_dataset(const LogDataset& ds, const std::filesystem::path& logs,
                   const std::optional<std::filesystem::path>& truth = std::nullopt);

}  // namespace covert
