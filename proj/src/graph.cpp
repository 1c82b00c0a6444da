// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/graph.hpp"

#include "covert/error.hpp"
#include "covert/text.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace covert {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges,
             std::optional<std::vector<std::size_t>> cluster_of,
             std::vector<std::string> labels)
    : node_count_(node_count), edges_(std::move(edges)), cluster_of_(std::move(cluster_of)),
      labels_(std::move(labels)) {
  for (auto& e : edges_) {
    if (e.first >= node_count_ || e.second >= node_count_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.first == e.second) throw std::invalid_argument("self-loop on node " + std::to_string(e.first));
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");

  if (cluster_of_) {
    if (cluster_of_->size() != node_count_)
      throw std::invalid_argument("cluster map must cover every node");
    for (auto c : *cluster_of_) cluster_count_ = std::max(cluster_count_, c + 1);
  }

  if (labels_.empty()) {
    labels_.reserve(node_count_);
    for (std::size_t j = 0; j < node_count_; ++j) labels_.push_back(std::to_string(j));
  } else if (labels_.size() != node_count_) {
    throw std::invalid_argument("label count does not match node count");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    text::check_label(l);
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate node label '" + l + "'");
  }

  std::vector<std::size_t> deg(node_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.first];
    ++deg[e.second];
  }
  adjacency_offsets_.assign(node_count_ + 1, 0);
  std::partial_sum(deg.begin(), deg.end(), adjacency_offsets_.begin() + 1);
  adjacency_.resize(adjacency_offsets_.back());
  std::vector<std::size_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.first]++] = e.second;
    adjacency_[fill[e.second]++] = e.first;
  }
  for (std::size_t j = 0; j < node_count_; ++j)
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(adjacency_offsets_[j]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(adjacency_offsets_[j + 1]));
}

std::span<const NodeIndex> Graph::neighbors(NodeIndex node) const {
  if (node >= node_count_) throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  return std::span<const NodeIndex>(adjacency_).subspan(
      adjacency_offsets_[node], adjacency_offsets_[node + 1] - adjacency_offsets_[node]);
}

bool Graph::has_edge(NodeIndex a, NodeIndex b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

const std::string& Graph::label(NodeIndex node) const {
  if (node >= node_count_) throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  return labels_[node];
}

std::optional<NodeIndex> Graph::find_label(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - labels_.begin());
}

std::size_t Graph::cluster_of(NodeIndex node) const {
  if (!cluster_of_) throw StateError("graph has no cluster attributes");
  if (node >= node_count_) throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  return (*cluster_of_)[node];
}

std::size_t degree(const Graph& g, NodeIndex node) { return g.neighbors(node).size(); }

double clustering_coefficient(const Graph& g, NodeIndex node) {
  const auto nb = g.neighbors(node);
  const std::size_t k = nb.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a) {
    // Count neighbors of nb[a] inside nb with a larger position: sorted merge.
    const auto other = g.neighbors(nb[a]);
    auto it = std::upper_bound(other.begin(), other.end(), nb[a]);
    auto jt = nb.begin() + static_cast<std::ptrdiff_t>(a + 1);
    while (it != other.end() && jt != nb.end()) {
      if (*it < *jt) {
        ++it;
      } else if (*jt < *it) {
        ++jt;
      } else {
        ++links;
        ++it;
        ++jt;
      }
    }
  }
  return static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

double gini(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total <= 0.0) return 0.0;
  // Sorted form of sum_jk |x_j - x_k|: 2 * sum_i (2i - n + 1) x_(i).
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * sorted[i];
  const double mean = total / static_cast<double>(n);
  return 2.0 * acc / (2.0 * static_cast<double>(n) * static_cast<double>(n) * mean);
}

double gini_degree(const Graph& g) {
  std::vector<double> deg(g.node_count());
  for (std::size_t j = 0; j < g.node_count(); ++j) deg[j] = static_cast<double>(degree(g, j));
  return gini(deg);
}

GraphStats graph_stats(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("graph_stats needs at least one node");
  GraphStats s;
  const auto m = static_cast<double>(g.node_count());
  s.avg_degree = 2.0 * static_cast<double>(g.edge_count()) / m;
  double w = 0.0;
  for (std::size_t j = 0; j < g.node_count(); ++j) w += clustering_coefficient(g, j);
  s.avg_clustering = w / m;
  s.gini = gini_degree(g);
  return s;
}

NodeIndex max_degree_node(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("empty graph");
  NodeIndex best = 0;
  for (NodeIndex j = 1; j < g.node_count(); ++j)
    if (degree(g, j) > degree(g, best)) best = j;
  return best;
}

NodeIndex min_degree_node(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("empty graph");
  NodeIndex best = 0;
  for (NodeIndex j = 1; j < g.node_count(); ++j)
    if (degree(g, j) < degree(g, best)) best = j;
  return best;
}

}  // namespace covert
