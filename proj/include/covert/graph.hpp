// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace covert {

using NodeIndex = std::size_t;

/// Unordered edge, stored with first < second.
struct Edge {
  NodeIndex first = 0;
  NodeIndex second = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph with optional node labels and cluster
/// attributes. Nodes are dense indices 0..M-1.
///
/// The constructor normalizes edge orientation, sorts the edge list and rejects
/// self-loops, duplicates, out-of-range endpoints, duplicate labels and partial
/// cluster maps.
class Graph {
 public:
  Graph(std::size_t node_count, std::vector<Edge> edges,
        std::optional<std::vector<std::size_t>> cluster_of = std::nullopt,
        std::vector<std::string> labels = {});

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  /// Sorted neighbor indices of `node`. Throws std::out_of_range.
  std::span<const NodeIndex> neighbors(NodeIndex node) const;
  bool has_edge(NodeIndex a, NodeIndex b) const;

  const std::string& label(NodeIndex node) const;
  std::span<const std::string> labels() const { return labels_; }
  std::optional<NodeIndex> find_label(std::string_view label) const;

  bool has_clusters() const { return cluster_of_.has_value(); }
  /// Cluster of `node`; throws std::logic_error if the graph has no clusters.
  std::size_t cluster_of(NodeIndex node) const;
  std::size_t cluster_count() const { return cluster_count_; }

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<NodeIndex> adjacency_;
  std::optional<std::vector<std::size_t>> cluster_of_;
  std::size_t cluster_count_ = 0;
  std::vector<std::string> labels_;
};

/// Table-1 style topology summary.
struct GraphStats {
  double avg_degree = 0.0;
  double avg_clustering = 0.0;
  double gini = 0.0;
};

std::size_t degree(const Graph& g, NodeIndex node);

/// Watts-Strogatz local clustering coefficient. Nodes with degree < 2 give 0.
double clustering_coefficient(const Graph& g, NodeIndex node);

/// Gini coefficient of an arbitrary non-negative sequence via the mean absolute
/// difference: sum_jk |x_j - x_k| / (2 n^2 mean). 0 for empty or all-zero input.
double gini(std::span<const double> values);

/// Gini coefficient of the degree sequence of `g`.
double gini_degree(const Graph& g);

/// Average degree, mean clustering coefficient over all nodes (degree < 2
/// contributes 0) and degree Gini. Requires at least one node.
GraphStats graph_stats(const Graph& g);

/// Highest-degree node, lowest index on ties.
NodeIndex max_degree_node(const Graph& g);
/// Lowest-degree node, lowest index on ties.
NodeIndex min_degree_node(const Graph& g);

// Edge-list files: one edge per line as two whitespace separated labels, lines
// starting with '#' are comments. A `# nodes: a b c` comment, when present,
// fixes the node set and index order (and so can declare isolated nodes);
// without it nodes are indexed in order of first appearance. Cluster files hold
// one `label<TAB>cluster-index` line per node.

Graph read_edge_list(const std::filesystem::path& edges,
                     const std::optional<std::filesystem::path>& clusters = std::nullopt);

/// Writes the edge list (with the `# nodes:` header) and, if the graph has
/// clusters and `clusters` is set, the cluster file.
void write_edge_list(const Graph& g, const std::filesystem::path& edges,
                     const std::optional<std::filesystem::path>& clusters = std::nullopt);

}  // namespace covert
