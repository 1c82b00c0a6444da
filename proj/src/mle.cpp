// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/mle.hpp"

#include "covert/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace covert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Product prod_{k != j} q_jk for one initiator, split into the number of
/// zero factors and the log-sum of the others. Keeping the zero count apart
/// lets boundary parameters (r exactly 0 or 1) go through the same code as
/// interior ones without 0 * inf.
struct InitiatorFactor {
  std::size_t zeros = 0;
  double log_sum = 0.0;
};

/// Per-theta tables for fast factor evaluation. For initiator j the "all
/// absent" product prod_{k != j} (1 - r_jk) is precomputed; a log then only
/// swaps the factors of its own members.
class FactorTable {
 public:
  explicit FactorTable(const Theta& theta) : theta_(theta), n_(theta.size()) {
    log_r_.resize(n_ * n_);
    log_not_r_.resize(n_ * n_);
    absent_zeros_.assign(n_, 0);
    absent_log_.assign(n_, 0.0);
    for (NodeIndex j = 0; j < n_; ++j)
      for (NodeIndex k = 0; k < n_; ++k) {
        if (j == k) continue;
        const double r = theta.r(j, k);
        log_r_[j * n_ + k] = std::log(r);
        log_not_r_[j * n_ + k] = std::log1p(-r);
        if (r == 1.0)
          ++absent_zeros_[j];
        else
          absent_log_[j] += log_not_r_[j * n_ + k];
      }
  }

  InitiatorFactor factor(NodeIndex j, std::span<const NodeIndex> members) const {
    InitiatorFactor out{absent_zeros_[j], absent_log_[j]};
    for (const NodeIndex k : members) {
      if (k == j) continue;
      const double r = theta_.r(j, k);
      if (r == 1.0)
        --out.zeros;
      else
        out.log_sum -= log_not_r_[j * n_ + k];
      if (r == 0.0)
        ++out.zeros;
      else
        out.log_sum += log_r_[j * n_ + k];
    }
    return out;
  }

  double log_f(NodeIndex j) const { return std::log(theta_.f(j)); }

 private:
  const Theta& theta_;
  std::size_t n_;
  std::vector<double> log_r_;
  std::vector<double> log_not_r_;
  std::vector<std::size_t> absent_zeros_;
  std::vector<double> absent_log_;
};

double log_probability_of(const FactorTable& table, std::span<const NodeIndex> members) {
  // log-sum-exp over initiators present in the log.
  double peak = kNegInf;
  std::vector<double> terms;
  terms.reserve(members.size());
  for (const NodeIndex j : members) {
    const auto fac = table.factor(j, members);
    if (fac.zeros != 0) continue;
    const double t = table.log_f(j) + fac.log_sum;
    if (t == kNegInf) continue;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  if (terms.empty()) return kNegInf;
  double acc = 0.0;
  for (const double t : terms) acc += std::exp(t - peak);
  return peak + std::log(acc);
}

void check_dimensions(const Theta& theta, const LogDataset& ds) {
  if (theta.size() != ds.node_count())
    throw std::invalid_argument("theta covers " + std::to_string(theta.size()) + " nodes but the dataset has " +
                                std::to_string(ds.node_count()));
  if (theta.transmission.size() != theta.size() * theta.size())
    throw std::invalid_argument("transmission matrix size does not match node count");
}

double log_likelihood_over(const Theta& theta, const LogDataset& ds, std::span<const std::size_t> rows) {
  const FactorTable table(theta);
  double total = 0.0;
  for (const std::size_t i : rows) {
    total += log_probability_of(table, ds.log(i));
    if (total == kNegInf) return kNegInf;
  }
  return total;
}

ThetaGradient gradients_over(const Theta& theta, const LogDataset& ds, std::span<const std::size_t> rows) {
  const std::size_t n = theta.size();
  const FactorTable table(theta);
  ThetaGradient g{std::vector<double>(n, 0.0), std::vector<double>(n * n, 0.0)};
  for (const std::size_t i : rows) {
    const auto members = ds.log(i);
    const double lp = log_probability_of(table, members);
    if (lp == kNegInf)
      throw std::domain_error("log " + std::to_string(i) + " has zero probability; gradient undefined");
    for (const NodeIndex j : members) {
      const auto fac = table.factor(j, members);
      if (fac.zeros >= 2) continue;
      // prod_{k != j} q_jk / p, or with the single zero factor left out.
      const double ratio = std::exp(fac.log_sum - lp);
      const double coef = theta.f(j) * ratio;
      if (fac.zeros == 0) {
        g.initiation[j] += ratio;
        for (NodeIndex m = 0; m < n; ++m) {
          if (m == j) continue;
          const double r = theta.r(j, m);
          if (ds.contains(i, m))
            g.transmission[j * n + m] += coef / r;
          else
            g.transmission[j * n + m] -= coef / (1.0 - r);
        }
      } else {
        for (NodeIndex m = 0; m < n; ++m) {
          if (m == j) continue;
          const bool present = ds.contains(i, m);
          const double q = present ? theta.r(j, m) : 1.0 - theta.r(j, m);
          if (q == 0.0) {
            g.transmission[j * n + m] += present ? coef : -coef;
            break;
          }
        }
      }
    }
  }
  return g;
}

std::vector<std::size_t> all_rows(const LogDataset& ds) {
  std::vector<std::size_t> rows(ds.log_count());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void clamp_transmission(Theta& theta, double floor) {
  const std::size_t n = theta.size();
  for (NodeIndex j = 0; j < n; ++j)
    for (NodeIndex k = 0; k < n; ++k) theta.r(j, k) = j == k ? 0.0 : std::clamp(theta.r(j, k), floor, 1.0 - floor);
}

// Inverse diagonal Fisher scaling. W_j = f_j dL/df_j is the expected number
// of logs initiated by j, which turns the f direction into W/D - f and the
// r direction into the W-weighted mean of (x_k - r_jk).
void precondition(const Theta& theta, ThetaGradient& g, double log_count) {
  const std::size_t n = theta.size();
  for (NodeIndex j = 0; j < n; ++j) {
    const double weight = theta.f(j) * g.initiation[j];
    for (NodeIndex k = 0; k < n; ++k) {
      if (j == k) continue;
      const double r = theta.r(j, k);
      double& d = g.transmission[j * n + k];
      d = weight > 0.0 ? r * (1.0 - r) * d / weight : 0.0;
    }
    g.initiation[j] = weight / log_count - theta.f(j);
  }
}

}  // namespace

void validate(const FitConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate))
    throw std::invalid_argument("learning rate must be finite and >= 0");
  if (cfg.max_iterations == 0) throw std::invalid_argument("max iterations must be positive");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(cfg.floor > 0.0 && cfg.floor < 0.5)) throw std::invalid_argument("parameter floor must lie in (0, 0.5)");
}

double log_probability(const Theta& theta, std::span<const std::uint8_t> row) {
  if (row.size() != theta.size())
    throw std::invalid_argument("log row has " + std::to_string(row.size()) + " entries, theta has " +
                                std::to_string(theta.size()) + " nodes");
  if (theta.transmission.size() != theta.size() * theta.size())
    throw std::invalid_argument("transmission matrix size does not match node count");
  std::vector<NodeIndex> members;
  for (NodeIndex j = 0; j < row.size(); ++j)
    if (row[j] != 0) members.push_back(j);
  return log_probability_of(FactorTable(theta), members);
}

double log_probability(const Theta& theta, const LogDataset& ds, std::size_t log) {
  check_dimensions(theta, ds);
  return log_probability_of(FactorTable(theta), ds.log(log));
}

double log_likelihood(const Theta& theta, const LogDataset& ds) {
  check_dimensions(theta, ds);
  return log_likelihood_over(theta, ds, all_rows(ds));
}

ThetaGradient gradients(const Theta& theta, const LogDataset& ds) {
  check_dimensions(theta, ds);
  return gradients_over(theta, ds, all_rows(ds));
}

void normalize_with_floor(std::span<double> values, double floor) {
  const std::size_t n = values.size();
  if (n == 0) return;
  if (!(floor * static_cast<double>(n) < 1.0)) throw std::invalid_argument("floor too large for the simplex dimension");
  // Entries that would land below the floor are pinned to it; the others are
  // rescaled to share the remaining mass. Pinning only ever grows, so this
  // settles within n rounds.
  std::vector<bool> pinned(n, false);
  std::size_t pinned_count = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (!(values[j] > 0.0) || !std::isfinite(values[j])) {
      pinned[j] = true;
      ++pinned_count;
    }
  double scale = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    double free_mass = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (!pinned[j]) free_mass += values[j];
    if (pinned_count == n || free_mass <= 0.0) {
      std::fill(values.begin(), values.end(), 1.0 / static_cast<double>(n));
      return;
    }
    scale = (1.0 - floor * static_cast<double>(pinned_count)) / free_mass;
    for (std::size_t j = 0; j < n; ++j)
      if (!pinned[j] && values[j] * scale < floor) {
        pinned[j] = true;
        ++pinned_count;
        changed = true;
      }
  }
  for (std::size_t j = 0; j < n; ++j) values[j] = pinned[j] ? floor : values[j] * scale;
}

Theta initial_theta(const LogDataset& ds, double floor) {
  const std::size_t n = ds.node_count();
  Theta theta(n);
  double total = 0.0;
  for (NodeIndex j = 0; j < n; ++j) total += static_cast<double>(ds.appearances(j));
  for (NodeIndex j = 0; j < n; ++j)
    theta.initiation[j] = total > 0.0 ? static_cast<double>(ds.appearances(j)) / total : 1.0 / static_cast<double>(n);
  normalize_with_floor(theta.initiation, floor);

  std::vector<std::size_t> both(n * n, 0);
  for (std::size_t i = 0; i < ds.log_count(); ++i) {
    const auto row = ds.log(i);
    for (const NodeIndex a : row)
      for (const NodeIndex b : row)
        if (a != b) ++both[a * n + b];
  }
  for (NodeIndex j = 0; j < n; ++j) {
    const double app = static_cast<double>(ds.appearances(j));
    for (NodeIndex k = 0; k < n; ++k)
      if (j != k) theta.r(j, k) = app > 0.0 ? static_cast<double>(both[j * n + k]) / app : floor;
  }
  clamp_transmission(theta, floor);
  return theta;
}

FitResult fit(const LogDataset& ds, const FitConfig& cfg) {
  validate(cfg);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.log_count(); ++i)
    if (!ds.log(i).empty()) rows.push_back(i);
  if (rows.empty()) throw std::invalid_argument("cannot fit: every log is empty");
  if (cfg.floor * static_cast<double>(ds.node_count()) >= 1.0)
    throw std::invalid_argument("parameter floor times node count must stay below 1");

  FitResult out;
  out.theta = initial_theta(ds, cfg.floor);
  double current = log_likelihood_over(out.theta, ds, rows);
  out.log_likelihood_trace.push_back(current);

  double step = cfg.learning_rate;
  Theta candidate;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    out.iterations = it;
    if (cfg.learning_rate == 0.0) {
      out.log_likelihood_trace.push_back(current);
      out.converged = true;
      break;
    }
    auto grad = gradients_over(out.theta, ds, rows);
    if (cfg.direction == FitConfig::Direction::kNatural)
      precondition(out.theta, grad, static_cast<double>(rows.size()));
    bool accepted = false;
    double next = current;
    // 60 halvings take any step below the resolution of the parameters.
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      candidate = out.theta;
      for (std::size_t a = 0; a < candidate.transmission.size(); ++a)
        candidate.transmission[a] += step * grad.transmission[a];
      for (std::size_t j = 0; j < candidate.size(); ++j) candidate.initiation[j] += step * grad.initiation[j];
      clamp_transmission(candidate, cfg.floor);
      normalize_with_floor(candidate.initiation, cfg.floor);
      next = log_likelihood_over(candidate, ds, rows);
      if (next >= current) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.log_likelihood_trace.push_back(current);
      out.converged = true;
      break;
    }
    const double delta = next - current;
    std::swap(out.theta, candidate);
    current = next;
    out.log_likelihood_trace.push_back(current);
    if (delta < cfg.tolerance) {
      out.converged = true;
      break;
    }
    step = std::min(cfg.learning_rate, 2.0 * step);
  }
  return out;
}

std::vector<double> mle_scores(const FitResult& fit, const LogDataset& ds) {
  check_dimensions(fit.theta, ds);
  const FactorTable table(fit.theta);
  std::vector<double> scores(ds.log_count());
  for (std::size_t i = 0; i < ds.log_count(); ++i) scores[i] = -log_probability_of(table, ds.log(i));
  return scores;
}

RankingResult score_logs(const FitResult& fit, const LogDataset& ds) { return rank_by_score(mle_scores(fit, ds)); }

void write_fit(const FitResult& fit, const LogDataset& ds, const std::filesystem::path& initiation_csv,
               const std::filesystem::path& transmission_csv) {
  check_dimensions(fit.theta, ds);
  const std::size_t n = ds.node_count();
  std::string f = "label,f\n";
  for (NodeIndex j = 0; j < n; ++j) f += ds.label(j) + ',' + text::format_double(fit.theta.f(j)) + '\n';
  text::write_file(initiation_csv, f);

  std::string r = "initiator";
  for (NodeIndex k = 0; k < n; ++k) r += ',' + ds.label(k);
  r += '\n';
  for (NodeIndex j = 0; j < n; ++j) {
    r += ds.label(j);
    for (NodeIndex k = 0; k < n; ++k) r += ',' + text::format_double(fit.theta.r(j, k));
    r += '\n';
  }
  text::write_file(transmission_csv, r);
}

}  // namespace covert
