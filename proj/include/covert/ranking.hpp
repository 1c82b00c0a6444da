// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace covert {

/// Logs ordered from most to least suspicious.
///
/// `order[0]` is the index of the most suspicious log. Scores are kept per log
/// index (not per rank). The order sorts scores non-increasingly with ties
/// broken by ascending log index; +inf sorts first.
struct RankingResult {
  std::vector<std::size_t> order;
  std::vector<double> scores;
};

/// Builds the ranking for per-log scores. NaN scores are rejected.
RankingResult rank_by_score(std::vector<double> scores);

/// CSV with header `rank,log_index,score`, one row per rank (rank is 1-based).
void write_ranking(const RankingResult& ranking, const std::filesystem::path& path);
RankingResult read_ranking(const std::filesystem::path& path);

}  // namespace covert
