// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/ranking.hpp"
#include "covert/transmission.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace covert {

/// Precision, recall and F over the number of retrieved logs; entry k is for
/// D_r = k + 1.
struct RetrievalCurve {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f_measure;

  std::size_t size() const { return precision.size(); }
};

struct EvalCurves {
  RetrievalCurve ranked;
  RetrievalCurve limit;   // oracle retrieving every target first
  RetrievalCurve random;  // expectation under a uniformly random order
  std::size_t targets = 0;  // D_t
};

/// Harmonic mean, 0 when both inputs are 0.
double f_measure(double precision, double recall);

/// Curves for a 0/1 relevance sequence in retrieval order. Requires at least
/// one relevant entry (std::invalid_argument otherwise).
RetrievalCurve retrieval_curve(const std::vector<bool>& relevance_in_order);

/// Requires 1 <= targets <= total.
RetrievalCurve theoretical_limit(std::size_t total, std::size_t targets);
RetrievalCurve random_baseline(std::size_t total, std::size_t targets);

/// Scores the ranking against the dataset's ground truth. Throws StateError
/// when the dataset has no ground truth or no target logs, and
/// std::invalid_argument when the ranking is not a permutation of the logs.
EvalCurves evaluate(const RankingResult& ranking, const LogDataset& ds);

/// Column-wise mean and standard deviation of several curve sets of equal length.
struct CurveSummary {
  EvalCurves mean;
  RetrievalCurve stddev;  // of the ranked curves
};
CurveSummary summarize(std::span<const EvalCurves> runs);

/// CSV `D_r,precision,recall,f,p_limit,r_limit,f_limit,p_rand,r_rand,f_rand`.
void write_curves(const EvalCurves& curves, const std::filesystem::path& path);
/// CSV `D_r,precision_sd,recall_sd,f_sd`.
void write_curve_stddev(const RetrievalCurve& stddev, const std::filesystem::path& path);

}  // namespace covert
