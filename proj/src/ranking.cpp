// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/ranking.hpp"

#include "covert/error.hpp"
#include "covert/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace covert {

RankingResult rank_by_score(std::vector<double> scores) {
  for (const double s : scores)
    if (std::isnan(s)) throw std::invalid_argument("ranking score is NaN");
  RankingResult out;
  out.order.resize(scores.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  out.scores = std::move(scores);
  return out;
}

void write_ranking(const RankingResult& ranking, const std::filesystem::path& path) {
  std::string out = "rank,log_index,score\n";
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const std::size_t i = ranking.order[r];
    out += std::to_string(r + 1) + ',' + std::to_string(i) + ',' + text::format_double(ranking.scores[i]) + '\n';
  }
  text::write_file(path, out);
}

RankingResult read_ranking(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  if (lines.empty() || text::trim(lines[0]) != "rank,log_index,score")
    throw ParseError(path.string() + ":1: expected header 'rank,log_index,score'");
  RankingResult out;
  std::vector<std::pair<std::size_t, double>> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto line = text::trim(lines[n]);
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected three columns");
    try {
      const auto rank = text::parse_uint(line.substr(0, c1), "rank");
      if (rank != rows.size() + 1) throw std::invalid_argument("ranks must run 1..D in order");
      rows.emplace_back(text::parse_uint(line.substr(c1 + 1, c2 - c1 - 1), "log_index"),
                        text::parse_double(line.substr(c2 + 1), "score"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": " + e.what());
    }
  }
  out.scores.assign(rows.size(), 0.0);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [index, score] : rows) {
    if (index >= rows.size() || seen[index])
      throw ParseError(path.string() + ": log indices are not a permutation of 0..D-1");
    seen[index] = true;
    out.order.push_back(index);
    out.scores[index] = score;
  }
  return out;
}

}  // namespace covert
