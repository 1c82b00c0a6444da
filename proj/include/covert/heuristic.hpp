// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/ranking.hpp"
#include "covert/transmission.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace covert {

/// Jaccard coefficient of the occurrence sets of two overt nodes: logs holding
/// both over logs holding either. 0 when neither node appears anywhere.
double jaccard(const LogDataset& ds, NodeIndex a, NodeIndex b);

/// k-medoids partition of the overt nodes that appear in at least one log.
struct Clustering {
  static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> cluster_of;  // per overt node; kUnassigned if it never appears
  std::vector<NodeIndex> medoids;       // medoids[l] is the medoid of cluster l
  std::vector<double> cost_trace;       // total within-cluster distance after each assignment
  std::size_t iterations = 0;
  bool converged = false;

  std::size_t cluster_count() const { return medoids.size(); }
};

inline constexpr std::size_t kKMedoidsMaxIterations = 100;

/// k-medoids under the distance 1 - Jaccard.
///
/// Seed medoids are C distinct appearing nodes drawn uniformly without
/// replacement. Each round assigns every node to its nearest medoid (medoids
/// to themselves, ties to the lowest cluster index), then moves each medoid to
/// the member with the smallest summed distance to its cluster, keeping the
/// current medoid on ties. Stops once the medoids are stable or after
/// kKMedoidsMaxIterations rounds.
///
/// Throws std::invalid_argument if C is 0 or exceeds the number of appearing
/// nodes.
Clustering kmedoids(const LogDataset& ds, std::size_t clusters, std::uint64_t seed);

/// Correlation between log i and cluster l: the largest 1/appearances(n) over
/// members n of cluster l present in log i, 0 when the log misses the cluster.
double cluster_weight(const LogDataset& ds, const Clustering& cl, std::size_t log, std::size_t cluster);

/// Suspiciousness of each log as the number of clusters it touches.
std::vector<double> heuristic_scores(const LogDataset& ds, const Clustering& cl);

/// kmedoids followed by heuristic_scores and rank_by_score.
RankingResult heuristic_rank(const LogDataset& ds, std::size_t clusters, std::uint64_t seed);

}  // namespace covert
