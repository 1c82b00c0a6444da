// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/graph.hpp"

#include <cstdint>

namespace covert {

/// Clustered preferential-attachment growth parameters.
///
/// Each arriving node draws its link count uniformly from
/// [min_links_per_node, max_links_per_node]. The defaults (two links per node,
/// every seed pair linked) give, over 50 seeds at M=101 and C=5,
/// <K> ~ 4.0, <W> ~ 0.39 / 0.22 and G ~ 0.37 for eta = 50 / 2.5.
struct SynthesisConfig {
  std::size_t node_count = 101;
  std::size_t cluster_count = 5;
  double contrast = 50.0;  // eta
  std::size_t min_links_per_node = 2;
  std::size_t max_links_per_node = 2;
  std::size_t initial_intercluster_edges = 10;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const SynthesisConfig& cfg);

/// Grows a clustered Barabasi-Albert network.
///
/// Clusters are assigned round-robin (node j belongs to cluster j mod C). The
/// first C nodes are seeds, one per cluster, joined by
/// `initial_intercluster_edges` distinct random links (capped at C(C-1)/2).
/// Every later node k picks its links one at a time from the existing nodes
/// with weight eta*(C-1)*w(j) inside its own cluster and w(j) elsewhere, where
/// w(j) is the degree of j, or 1 for a node that still has degree 0. Draws that
/// would duplicate a link are retried up to M times and then dropped.
///
/// Deterministic in the config: the same config (seed included) yields the
/// same edge set.
Graph synthesize(const SynthesisConfig& cfg);

}  // namespace covert
