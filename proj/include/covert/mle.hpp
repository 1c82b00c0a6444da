// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include "covert/ranking.hpp"
#include "covert/transmission.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace covert {

/// Optimizer settings for the maximum-likelihood fit.
///
/// Each iteration moves theta along a search direction, clamps r into
/// [eps, 1-eps], renormalizes f with normalize_with_floor and halves the step
/// until the log-likelihood does not decrease. kPlain uses the raw gradient.
/// kNatural (the default) scales it by the inverse diagonal Fisher
/// information, so a unit step is one expectation-maximization update and
/// the f part stays on the simplex. The raw f gradient points mostly along
/// (1, ..., 1), which renormalization undoes, and plain steps often stall.
struct FitConfig {
  enum class Direction { kNatural, kPlain };
  Direction direction = Direction::kNatural;
  double learning_rate = 1.0;      // largest step tried per iteration; 0 freezes theta
  std::size_t max_iterations = 2000;
  double tolerance = 1e-6;         // stop when |delta L| falls below this
  double floor = 1e-6;             // epsilon: r in [eps, 1-eps], f >= eps
};

/// Throws std::invalid_argument for negative/non-finite values, zero
/// iterations, a non-positive tolerance or a floor outside (0, 0.5).
void validate(const FitConfig& cfg);

struct FitResult {
  Theta theta;                               // over the dataset's overt nodes
  std::vector<double> log_likelihood_trace;  // initial value, then one entry per iteration
  std::size_t iterations = 0;
  bool converged = false;
};

/// Gradient of the log-likelihood. `transmission` is row-major N x N with a
/// zero diagonal.
struct ThetaGradient {
  std::vector<double> initiation;
  std::vector<double> transmission;
};

/// log p(d|theta) for a log given as a 0/1 row of length N:
///   p = sum_j d_j f_j prod_{k != j} (d_k r_jk + (1 - d_k)(1 - r_jk)).
/// Returns -inf when p = 0 (always for an empty log). Throws
/// std::invalid_argument on a size mismatch.
double log_probability(const Theta& theta, std::span<const std::uint8_t> row);
double log_probability(const Theta& theta, const LogDataset& ds, std::size_t log);

/// Sum of log_probability over all logs; -inf if any log is impossible.
double log_likelihood(const Theta& theta, const LogDataset& ds);

/// Analytic gradient of log_likelihood. Throws std::domain_error if some log
/// has zero probability under theta.
ThetaGradient gradients(const Theta& theta, const LogDataset& ds);

/// Data-driven starting point: f proportional to appearance counts, r(j,k) =
/// co-occurrences(j,k) / appearances(j), both pushed into the floored
/// feasible set (nodes that never appear get r = floor).
Theta initial_theta(const LogDataset& ds, double floor);

/// Clamps `values` to at least `floor` and rescales the rest so the entries
/// sum to 1; entries the rescaling would push below the floor are pinned to it.
/// Non-positive or non-finite entries count as below the floor. Requires
/// floor * size < 1.
void normalize_with_floor(std::span<double> values, double floor);

/// Projected gradient ascent on the log-likelihood over the non-empty logs.
///
/// Each iteration steps along the gradient, clamps r into [floor, 1-floor] and
/// renormalizes f with normalize_with_floor; the step is halved until the
/// likelihood does not decrease, so the trace is non-decreasing. The step
/// starts at learning_rate and grows back by doubling (never above
/// learning_rate) after accepted iterations. Stops when |delta L| <
/// tolerance, when no step improves, or after max_iterations.
///
/// Throws std::invalid_argument if the dataset has no non-empty log.
FitResult fit(const LogDataset& ds, const FitConfig& cfg);

/// -log p(d_i | theta_hat) per log (+inf for impossible logs, e.g. empty ones).
std::vector<double> mle_scores(const FitResult& fit, const LogDataset& ds);

/// mle_scores followed by rank_by_score: least probable logs first.
RankingResult score_logs(const FitResult& fit, const LogDataset& ds);

/// f as CSV `label,f` and r as an N x N CSV whose first row and column hold
/// the labels (row = initiator, column = responder).
void write_fit(const FitResult& fit, const LogDataset& ds, const std::filesystem::path& initiation_csv,
               const std::filesystem::path& transmission_csv);

}  // namespace covert
