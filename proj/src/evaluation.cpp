// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/evaluation.hpp"

#include "covert/error.hpp"
#include "covert/text.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace covert {

namespace {

void check_counts(std::size_t total, std::size_t targets) {
  if (targets == 0 || targets > total)
    throw std::invalid_argument("need 1 <= D_t <= D (got D_t=" + std::to_string(targets) +
                                ", D=" + std::to_string(total) + ")");
}

RetrievalCurve from_hits(std::span<const std::size_t> hits, std::size_t targets) {
  RetrievalCurve c;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    const double p = static_cast<double>(hits[k]) / static_cast<double>(k + 1);
    const double r = static_cast<double>(hits[k]) / static_cast<double>(targets);
    c.precision.push_back(p);
    c.recall.push_back(r);
    c.f_measure.push_back(f_measure(p, r));
  }
  return c;
}

}  // namespace

double f_measure(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

RetrievalCurve retrieval_curve(const std::vector<bool>& relevance_in_order) {
  std::vector<std::size_t> hits;
  std::size_t running = 0;
  for (const bool rel : relevance_in_order) hits.push_back(running += rel ? 1 : 0);
  if (running == 0) throw std::invalid_argument("no relevant entries; retrieval curve undefined");
  return from_hits(hits, running);
}

RetrievalCurve theoretical_limit(std::size_t total, std::size_t targets) {
  check_counts(total, targets);
  std::vector<std::size_t> hits(total);
  for (std::size_t k = 0; k < total; ++k) hits[k] = std::min(k + 1, targets);
  return from_hits(hits, targets);
}

RetrievalCurve random_baseline(std::size_t total, std::size_t targets) {
  check_counts(total, targets);
  RetrievalCurve c;
  const double p = static_cast<double>(targets) / static_cast<double>(total);
  for (std::size_t k = 0; k < total; ++k) {
    const double r = static_cast<double>(k + 1) / static_cast<double>(total);
    c.precision.push_back(p);
    c.recall.push_back(r);
    c.f_measure.push_back(f_measure(p, r));
  }
  return c;
}

EvalCurves evaluate(const RankingResult& ranking, const LogDataset& ds) {
  const std::size_t total = ds.log_count();
  if (ranking.order.size() != total)
    throw std::invalid_argument("ranking covers " + std::to_string(ranking.order.size()) + " logs, dataset has " +
                                std::to_string(total));
  const std::size_t targets = count_targets(ds);
  if (targets == 0) throw StateError("no target logs; evaluation vacuous");
  std::vector<bool> seen(total, false);
  std::vector<bool> relevance;
  relevance.reserve(total);
  for (const std::size_t i : ranking.order) {
    if (i >= total || seen[i]) throw std::invalid_argument("ranking order is not a permutation of the logs");
    seen[i] = true;
    relevance.push_back(ds.is_target(i));
  }
  EvalCurves out;
  out.targets = targets;
  out.ranked = retrieval_curve(relevance);
  out.limit = theoretical_limit(total, targets);
  out.random = random_baseline(total, targets);
  return out;
}

CurveSummary summarize(std::span<const EvalCurves> runs) {
  if (runs.empty()) throw std::invalid_argument("nothing to summarize");
  const std::size_t len = runs.front().ranked.size();
  for (const auto& r : runs)
    if (r.ranked.size() != len) throw std::invalid_argument("curves have different lengths");
  const double count = static_cast<double>(runs.size());

  const auto mean_of = [&](auto member) {
    RetrievalCurve c;
    c.precision.assign(len, 0.0);
    c.recall.assign(len, 0.0);
    c.f_measure.assign(len, 0.0);
    for (const auto& r : runs) {
      const RetrievalCurve& src = r.*member;
      for (std::size_t k = 0; k < len; ++k) {
        c.precision[k] += src.precision[k] / count;
        c.recall[k] += src.recall[k] / count;
        c.f_measure[k] += src.f_measure[k] / count;
      }
    }
    return c;
  };

  CurveSummary s;
  s.mean.ranked = mean_of(&EvalCurves::ranked);
  s.mean.limit = mean_of(&EvalCurves::limit);
  s.mean.random = mean_of(&EvalCurves::random);
  double targets = 0.0;
  for (const auto& r : runs) targets += static_cast<double>(r.targets);
  s.mean.targets = static_cast<std::size_t>(std::lround(targets / count));

  s.stddev.precision.assign(len, 0.0);
  s.stddev.recall.assign(len, 0.0);
  s.stddev.f_measure.assign(len, 0.0);
  for (const auto& r : runs)
    for (std::size_t k = 0; k < len; ++k) {
      const auto sq = [](double x) { return x * x; };
      s.stddev.precision[k] += sq(r.ranked.precision[k] - s.mean.ranked.precision[k]) / count;
      s.stddev.recall[k] += sq(r.ranked.recall[k] - s.mean.ranked.recall[k]) / count;
      s.stddev.f_measure[k] += sq(r.ranked.f_measure[k] - s.mean.ranked.f_measure[k]) / count;
    }
  for (std::size_t k = 0; k < len; ++k) {
    s.stddev.precision[k] = std::sqrt(s.stddev.precision[k]);
    s.stddev.recall[k] = std::sqrt(s.stddev.recall[k]);
    s.stddev.f_measure[k] = std::sqrt(s.stddev.f_measure[k]);
  }
  return s;
}

void write_curves(const EvalCurves& c, const std::filesystem::path& path) {
  std::string out = "D_r,precision,recall,f,p_limit,r_limit,f_limit,p_rand,r_rand,f_rand\n";
  for (std::size_t k = 0; k < c.ranked.size(); ++k) {
    out += std::to_string(k + 1);
    for (const RetrievalCurve* curve : {&c.ranked, &c.limit, &c.random}) {
      out += ',' + text::format_double(curve->precision[k]);
      out += ',' + text::format_double(curve->recall[k]);
      out += ',' + text::format_double(curve->f_measure[k]);
    }
    out += '\n';
  }
  text::write_file(path, out);
}

void write_curve_stddev(const RetrievalCurve& sd, const std::filesystem::path& path) {
  std::string out = "D_r,precision_sd,recall_sd,f_sd\n";
  for (std::size_t k = 0; k < sd.size(); ++k)
    out += std::to_string(k + 1) + ',' + text::format_double(sd.precision[k]) + ',' +
           text::format_double(sd.recall[k]) + ',' + text::format_double(sd.f_measure[k]) + '\n';
  text::write_file(path, out);
}

}  // namespace covert
