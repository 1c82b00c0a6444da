// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/synthesis.hpp"

#include "covert/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace covert {

void validate(const SynthesisConfig& cfg) {
  if (cfg.cluster_count == 0) throw std::invalid_argument("cluster count must be positive");
  if (cfg.node_count < 2 * cfg.cluster_count)
    throw std::invalid_argument("node count " + std::to_string(cfg.node_count) +
                                " is below twice the cluster count " + std::to_string(cfg.cluster_count));
  if (!(cfg.contrast > 0.0) || !std::isfinite(cfg.contrast))
    throw std::invalid_argument("cluster contrast must be positive and finite");
  if (cfg.min_links_per_node == 0) throw std::invalid_argument("links per node must be at least 1");
  if (cfg.max_links_per_node < cfg.min_links_per_node)
    throw std::invalid_argument("max links per node is below min links per node");
}

Graph synthesize(const SynthesisConfig& cfg) {
  validate(cfg);
  const std::size_t m_total = cfg.node_count;
  const std::size_t c_total = cfg.cluster_count;
  Rng rng(cfg.seed);

  std::vector<std::size_t> cluster(m_total);
  for (std::size_t j = 0; j < m_total; ++j) cluster[j] = j % c_total;

  std::vector<std::size_t> deg(m_total, 0);
  std::vector<std::vector<bool>> linked(m_total, std::vector<bool>(m_total, false));
  std::vector<Edge> edges;
  const auto connect = [&](NodeIndex a, NodeIndex b) {
    linked[a][b] = linked[b][a] = true;
    ++deg[a];
    ++deg[b];
    edges.push_back({std::min(a, b), std::max(a, b)});
  };

  // Seed nodes 0..C-1 each sit in their own cluster, so every seed pair is
  // an inter-cluster pair.
  std::vector<Edge> seed_pairs;
  for (NodeIndex a = 0; a < c_total; ++a)
    for (NodeIndex b = a + 1; b < c_total; ++b) seed_pairs.push_back({a, b});
  shuffle(seed_pairs, rng);
  const std::size_t initial = std::min(cfg.initial_intercluster_edges, seed_pairs.size());
  for (std::size_t e = 0; e < initial; ++e) connect(seed_pairs[e].first, seed_pairs[e].second);

  const double intra_boost = cfg.contrast * static_cast<double>(c_total - 1);
  const std::size_t link_span = cfg.max_links_per_node - cfg.min_links_per_node + 1;
  std::vector<double> weight;
  for (NodeIndex k = c_total; k < m_total; ++k) {
    const std::size_t links =
        std::min<std::size_t>(cfg.min_links_per_node + uniform_index(rng, link_span), k);
    for (std::size_t l = 0; l < links; ++l) {
      // Weights are recomputed per link so a link made earlier in this round
      // counts toward its target's degree.
      weight.assign(k, 0.0);
      double total = 0.0;
      for (NodeIndex j = 0; j < k; ++j) {
        const double base = deg[j] == 0 ? 1.0 : static_cast<double>(deg[j]);
        weight[j] = (c_total > 1 && cluster[j] == cluster[k]) ? intra_boost * base : base;
        total += weight[j];
      }
      for (std::size_t attempt = 0; attempt < m_total; ++attempt) {
        double u = uniform01(rng) * total;
        NodeIndex target = k - 1;
        for (NodeIndex j = 0; j < k; ++j) {
          if (u < weight[j]) {
            target = j;
            break;
          }
          u -= weight[j];
        }
        if (!linked[k][target]) {
          connect(k, target);
          break;
        }
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(m_total);
  for (std::size_t j = 0; j < m_total; ++j) labels.push_back("n" + std::to_string(j));
  return Graph(m_total, std::move(edges), std::move(cluster), std::move(labels));
}

}  // namespace covert
