// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/transmission.hpp"

#include "covert/error.hpp"
#include "covert/random.hpp"
#include "covert/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace covert {

Theta::Theta(std::size_t n)
    : initiation(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n)), transmission(n * n, 0.0) {}

void validate(const Theta& theta) {
  const std::size_t n = theta.size();
  if (n == 0) throw std::invalid_argument("theta has no nodes");
  if (theta.transmission.size() != n * n)
    throw std::invalid_argument("transmission matrix size does not match node count");
  double total = 0.0;
  for (const double f : theta.initiation) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw std::invalid_argument("initiation probability must be >= 0");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("initiation probabilities must sum to 1");
  for (NodeIndex j = 0; j < n; ++j)
    for (NodeIndex k = 0; k < n; ++k) {
      if (j == k) continue;
      const double r = theta.r(j, k);
      if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("transmission probability outside [0,1]");
    }
}

Theta theta_from_graph(const Graph& g) {
  Theta theta(g.node_count());
  for (const auto& e : g.edges()) {
    theta.r(e.first, e.second) = 1.0;
    theta.r(e.second, e.first) = 1.0;
  }
  return theta;
}

std::vector<ActivityPattern> generate_patterns(const Theta& theta, std::size_t count,
                                               std::uint64_t seed) {
  validate(theta);
  const std::size_t n = theta.size();
  Rng rng(seed);
  std::vector<ActivityPattern> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = uniform01(rng);
    // Fall back to the last node with positive mass when rounding leaves u
    // above the running sum.
    NodeIndex initiator = n;
    for (NodeIndex j = 0; j < n; ++j) {
      if (theta.f(j) <= 0.0) continue;
      initiator = j;
      if (u < theta.f(j)) break;
      u -= theta.f(j);
    }
    ActivityPattern p;
    p.initiator = initiator;
    for (NodeIndex k = 0; k < n; ++k) {
      if (k == initiator) {
        p.members.push_back(k);
        continue;
      }
      if (uniform01(rng) < theta.r(initiator, k)) p.members.push_back(k);
    }
    out.push_back(std::move(p));
  }
  return out;
}

LogDataset::LogDataset(std::vector<std::string> overt_labels, std::vector<std::vector<NodeIndex>> logs,
                       std::optional<GroundTruth> truth)
    : labels_(std::move(overt_labels)), logs_(std::move(logs)), truth_(std::move(truth)) {
  const std::size_t n = labels_.size();
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    text::check_label(l);
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate overt label '" + l + "'");
  }

  matrix_.assign(logs_.size() * n, 0);
  appearances_.assign(n, 0);
  for (std::size_t i = 0; i < logs_.size(); ++i) {
    auto& row = logs_[i];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("log " + std::to_string(i) + " lists a node twice");
    for (const NodeIndex j : row) {
      if (j >= n) throw std::invalid_argument("log " + std::to_string(i) + " has node index out of range");
      matrix_[i * n + j] = 1;
      ++appearances_[j];
    }
  }

  if (!truth_) return;
  auto& t = *truth_;
  if (t.patterns.size() != logs_.size())
    throw std::invalid_argument("ground truth has a different number of patterns than logs");
  if (t.overt_source.size() != n) throw std::invalid_argument("overt index map has wrong size");
  const std::size_t m = t.node_labels.size();
  std::vector<std::optional<NodeIndex>> overt_of(m);
  for (NodeIndex j = 0; j < n; ++j) {
    const NodeIndex src = t.overt_source[j];
    if (src >= m || overt_of[src]) throw std::invalid_argument("invalid overt index map");
    if (t.node_labels[src] != labels_[j]) throw std::invalid_argument("overt label mismatch in ground truth");
    overt_of[src] = j;
  }
  for (std::size_t i = 0; i < logs_.size(); ++i) {
    auto& p = t.patterns[i];
    std::sort(p.members.begin(), p.members.end());
    if (p.members.empty() || !std::binary_search(p.members.begin(), p.members.end(), p.initiator))
      throw std::invalid_argument("pattern " + std::to_string(i) + " does not contain its initiator");
    std::vector<NodeIndex> projected;
    for (const NodeIndex v : p.members) {
      if (v >= m) throw std::invalid_argument("pattern node out of range");
      if (overt_of[v]) projected.push_back(*overt_of[v]);
    }
    std::sort(projected.begin(), projected.end());
    if (projected != logs_[i])
      throw std::invalid_argument("log " + std::to_string(i) + " is not the overt part of its pattern");
  }
}

const LogDataset::GroundTruth& LogDataset::ground_truth() const {
  if (!truth_) throw StateError("dataset carries no ground truth");
  return *truth_;
}

bool LogDataset::is_target(std::size_t i) const {
  return ground_truth().patterns.at(i).members.size() != logs_.at(i).size();
}

LogDataset project_logs(std::span<const ActivityPattern> patterns, std::span<const NodeIndex> covert,
                        std::span<const std::string> node_labels) {
  const std::size_t m = node_labels.size();
  std::vector<bool> is_covert(m, false);
  for (const NodeIndex c : covert) {
    if (c >= m) throw std::invalid_argument("covert node index out of range");
    is_covert[c] = true;
  }
  LogDataset::GroundTruth truth;
  truth.node_labels.assign(node_labels.begin(), node_labels.end());
  std::vector<NodeIndex> overt_of(m, m);
  std::vector<std::string> overt_labels;
  for (NodeIndex v = 0; v < m; ++v) {
    if (is_covert[v]) continue;
    overt_of[v] = truth.overt_source.size();
    truth.overt_source.push_back(v);
    overt_labels.push_back(node_labels[v]);
  }
  std::vector<std::vector<NodeIndex>> logs;
  logs.reserve(patterns.size());
  for (const auto& p : patterns) {
    std::vector<NodeIndex> row;
    for (const NodeIndex v : p.members) {
      if (v >= m) throw std::invalid_argument("pattern node out of range");
      if (!is_covert[v]) row.push_back(overt_of[v]);
    }
    logs.push_back(std::move(row));
  }
  truth.patterns.assign(patterns.begin(), patterns.end());
  return LogDataset(std::move(overt_labels), std::move(logs), std::move(truth));
}

std::size_t count_targets(const LogDataset& ds) {
  ds.ground_truth();
  std::size_t targets = 0;
  for (std::size_t i = 0; i < ds.log_count(); ++i)
    if (ds.is_target(i)) ++targets;
  return targets;
}

}  // namespace covert
