// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/error.hpp"
#include "covert/text.hpp"
#include "covert/transmission.hpp"

#include <unordered_map>

namespace covert {

namespace {

constexpr std::string_view kNodesHeader = "# nodes:";

struct LabelledRows {
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> rows;
};

LabelledRows read_rows(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  if (lines.empty() || text::trim(lines[0]).substr(0, kNodesHeader.size()) != kNodesHeader)
    throw ParseError(path.string() + ":1: expected '# nodes:' header");
  LabelledRows out;
  out.labels = text::split_whitespace(text::trim(lines[0]).substr(kNodesHeader.size()));
  for (std::size_t n = 1; n < lines.size(); ++n) out.rows.push_back(text::split_whitespace(lines[n]));
  return out;
}

std::vector<NodeIndex> resolve(const std::vector<std::string>& row,
                               const std::unordered_map<std::string, NodeIndex>& index,
                               const std::filesystem::path& path, std::size_t line) {
  std::vector<NodeIndex> out;
  out.reserve(row.size());
  for (const auto& l : row) {
    const auto it = index.find(l);
    if (it == index.end())
      throw ParseError(path.string() + ":" + std::to_string(line + 2) + ": unknown label '" + l + "'");
    out.push_back(it->second);
  }
  return out;
}

std::unordered_map<std::string, NodeIndex> index_labels(const std::vector<std::string>& labels,
                                                        const std::filesystem::path& path) {
  std::unordered_map<std::string, NodeIndex> index;
  for (NodeIndex j = 0; j < labels.size(); ++j)
    if (!index.emplace(labels[j], j).second)
      throw ParseError(path.string() + ":1: duplicate label '" + labels[j] + "'");
  return index;
}

std::string header(std::span<const std::string> labels) {
  std::string out(kNodesHeader);
  for (const auto& l : labels) {
    out += ' ';
    out += l;
  }
  out += '\n';
  return out;
}

}  // namespace

LogDataset read_dataset(const std::filesystem::path& logs_path,
                        const std::optional<std::filesystem::path>& truth_path) {
  auto logs = read_rows(logs_path);
  const auto overt_index = index_labels(logs.labels, logs_path);
  std::vector<std::vector<NodeIndex>> rows;
  for (std::size_t i = 0; i < logs.rows.size(); ++i)
    rows.push_back(resolve(logs.rows[i], overt_index, logs_path, i));

  std::optional<LogDataset::GroundTruth> truth;
  if (truth_path) {
    auto pat = read_rows(*truth_path);
    const auto full_index = index_labels(pat.labels, *truth_path);
    truth.emplace();
    for (const auto& l : logs.labels) {
      const auto it = full_index.find(l);
      if (it == full_index.end())
        throw ParseError(truth_path->string() + ": overt label '" + l + "' missing from header");
      truth->overt_source.push_back(it->second);
    }
    for (std::size_t i = 0; i < pat.rows.size(); ++i) {
      if (pat.rows[i].empty())
        throw ParseError(truth_path->string() + ":" + std::to_string(i + 2) + ": empty pattern");
      ActivityPattern p;
      p.members = resolve(pat.rows[i], full_index, *truth_path, i);
      p.initiator = p.members.front();
      truth->patterns.push_back(std::move(p));
    }
    truth->node_labels = std::move(pat.labels);
  }
  try {
    return LogDataset(std::move(logs.labels), std::move(rows), std::move(truth));
  } catch (const std::invalid_argument& e) {
    throw ParseError(logs_path.string() + ": " + e.what());
  }
}

void write_dataset(const LogDataset& ds, const std::filesystem::path& logs_path,
                   const std::optional<std::filesystem::path>& truth_path) {
  std::string out = header(ds.labels());
  for (std::size_t i = 0; i < ds.log_count(); ++i) {
    bool first = true;
    for (const NodeIndex j : ds.log(i)) {
      if (!first) out += ' ';
      out += ds.label(j);
      first = false;
    }
    out += '\n';
  }
  text::write_file(logs_path, out);

  if (!truth_path) return;
  const auto& t = ds.ground_truth();
  std::string gt = header(t.node_labels);
  for (const auto& p : t.patterns) {
    gt += t.node_labels[p.initiator];
    for (const NodeIndex v : p.members) {
      if (v == p.initiator) continue;
      gt += ' ';
      gt += t.node_labels[v];
    }
    gt += '\n';
  }
  text::write_file(*truth_path, gt);
}

}  // namespace covert
