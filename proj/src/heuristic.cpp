// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/heuristic.hpp"

#include "covert/random.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace covert {

namespace {

/// Dense pairwise distance table over the appearing nodes.
class DistanceTable {
 public:
  DistanceTable(const LogDataset& ds, const std::vector<NodeIndex>& nodes) : size_(nodes.size()) {
    const std::size_t n = ds.node_count();
    std::vector<std::size_t> slot(n, size_);
    for (std::size_t a = 0; a < size_; ++a) slot[nodes[a]] = a;
    std::vector<std::size_t> both(size_ * size_, 0);
    for (std::size_t i = 0; i < ds.log_count(); ++i) {
      const auto row = ds.log(i);
      for (const NodeIndex u : row)
        for (const NodeIndex v : row) ++both[slot[u] * size_ + slot[v]];
    }
    dist_.resize(size_ * size_);
    for (std::size_t a = 0; a < size_; ++a)
      for (std::size_t b = 0; b < size_; ++b) {
        const double inter = static_cast<double>(both[a * size_ + b]);
        const double uni =
            static_cast<double>(ds.appearances(nodes[a]) + ds.appearances(nodes[b])) - inter;
        dist_[a * size_ + b] = 1.0 - inter / uni;
      }
  }

  double operator()(std::size_t a, std::size_t b) const { return dist_[a * size_ + b]; }

 private:
  std::size_t size_;
  std::vector<double> dist_;
};

}  // namespace

double jaccard(const LogDataset& ds, NodeIndex a, NodeIndex b) {
  if (a >= ds.node_count() || b >= ds.node_count()) throw std::out_of_range("jaccard: node out of range");
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < ds.log_count(); ++i) {
    const bool in_a = ds.contains(i, a), in_b = ds.contains(i, b);
    both += (in_a && in_b) ? 1 : 0;
    either += (in_a || in_b) ? 1 : 0;
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

Clustering kmedoids(const LogDataset& ds, std::size_t clusters, std::uint64_t seed) {
  std::vector<NodeIndex> nodes;
  for (NodeIndex j = 0; j < ds.node_count(); ++j)
    if (ds.appearances(j) > 0) nodes.push_back(j);
  if (clusters == 0) throw std::invalid_argument("cluster count must be positive");
  if (clusters > nodes.size())
    throw std::invalid_argument("cluster count " + std::to_string(clusters) + " exceeds the " +
                                std::to_string(nodes.size()) + " nodes present in the logs");

  const DistanceTable dist(ds, nodes);
  const std::size_t count = nodes.size();

  // Positions into `nodes`.
  std::vector<std::size_t> order(count);
  for (std::size_t a = 0; a < count; ++a) order[a] = a;
  Rng rng(seed);
  shuffle(order, rng);
  std::vector<std::size_t> medoid(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(clusters));

  Clustering out;
  std::vector<std::size_t> assign(count, 0);
  std::vector<std::size_t> medoid_of_slot(count, Clustering::kUnassigned);
  while (out.iterations < kKMedoidsMaxIterations) {
    ++out.iterations;
    std::fill(medoid_of_slot.begin(), medoid_of_slot.end(), Clustering::kUnassigned);
    for (std::size_t l = 0; l < clusters; ++l) medoid_of_slot[medoid[l]] = l;

    double cost = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
      if (medoid_of_slot[a] != Clustering::kUnassigned) {
        assign[a] = medoid_of_slot[a];
        continue;
      }
      std::size_t best = 0;
      for (std::size_t l = 1; l < clusters; ++l)
        if (dist(a, medoid[l]) < dist(a, medoid[best])) best = l;
      assign[a] = best;
      cost += dist(a, medoid[best]);
    }
    out.cost_trace.push_back(cost);

    bool moved = false;
    for (std::size_t l = 0; l < clusters; ++l) {
      const auto summed = [&](std::size_t candidate) {
        double s = 0.0;
        for (std::size_t b = 0; b < count; ++b)
          if (assign[b] == l) s += dist(candidate, b);
        return s;
      };
      std::size_t best = medoid[l];
      double best_cost = summed(best);
      for (std::size_t a = 0; a < count; ++a) {
        if (assign[a] != l || a == medoid[l]) continue;
        const double c = summed(a);
        if (c < best_cost) {
          best = a;
          best_cost = c;
        }
      }
      if (best != medoid[l]) {
        medoid[l] = best;
        moved = true;
      }
    }
    if (!moved) {
      out.converged = true;
      break;
    }
  }

  out.cluster_of.assign(ds.node_count(), Clustering::kUnassigned);
  for (std::size_t a = 0; a < count; ++a) out.cluster_of[nodes[a]] = assign[a];
  // A medoid is always picked among its cluster's members, so it belongs to
  // its own cluster even when the iteration cap cuts the run short.
  for (std::size_t l = 0; l < clusters; ++l) out.medoids.push_back(nodes[medoid[l]]);
  return out;
}

double cluster_weight(const LogDataset& ds, const Clustering& cl, std::size_t log, std::size_t cluster) {
  if (log >= ds.log_count()) throw std::out_of_range("log index out of range");
  if (cluster >= cl.cluster_count()) throw std::out_of_range("cluster index out of range");
  double w = 0.0;
  for (const NodeIndex j : ds.log(log))
    if (cl.cluster_of[j] == cluster) w = std::max(w, 1.0 / static_cast<double>(ds.appearances(j)));
  return w;
}

std::vector<double> heuristic_scores(const LogDataset& ds, const Clustering& cl) {
  std::vector<double> scores(ds.log_count(), 0.0);
  std::vector<bool> touched(cl.cluster_count());
  for (std::size_t i = 0; i < ds.log_count(); ++i) {
    std::fill(touched.begin(), touched.end(), false);
    for (const NodeIndex j : ds.log(i))
      if (cl.cluster_of[j] != Clustering::kUnassigned) touched[cl.cluster_of[j]] = true;
    scores[i] = static_cast<double>(std::count(touched.begin(), touched.end(), true));
  }
  return scores;
}

RankingResult heuristic_rank(const LogDataset& ds, std::size_t clusters, std::uint64_t seed) {
  return rank_by_score(heuristic_scores(ds, kmedoids(ds, clusters, seed)));
}

}  // namespace covert
