// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/error.hpp"
#include "covert/graph.hpp"
#include "covert/text.hpp"

#include <map>
#include <set>
#include <string>
#include <unordered_map>

namespace covert {

namespace {

constexpr std::string_view kNodesHeader = "# nodes:";

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line + 1);
}

}  // namespace

Graph read_edge_list(const std::filesystem::path& edges_path,
                     const std::optional<std::filesystem::path>& clusters_path) {
  const auto lines = text::read_lines(edges_path);

  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeIndex> index;
  bool fixed_node_set = false;
  const auto intern = [&](const std::string& label, std::size_t line) -> NodeIndex {
    if (auto it = index.find(label); it != index.end()) return it->second;
    if (fixed_node_set)
      throw ParseError(where(edges_path, line) + ": label '" + label + "' missing from '# nodes:' header");
    index.emplace(label, labels.size());
    labels.push_back(label);
    return labels.size() - 1;
  };

  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = text::trim(lines[n]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.substr(0, kNodesHeader.size()) == kNodesHeader && labels.empty() && edges.empty()) {
        for (const auto& l : text::split_whitespace(line.substr(kNodesHeader.size()))) {
          if (index.count(l)) throw ParseError(where(edges_path, n) + ": duplicate label '" + l + "'");
          intern(l, n);
        }
        fixed_node_set = true;
      }
      continue;
    }
    const auto tokens = text::split_whitespace(line);
    if (tokens.size() != 2) throw ParseError(where(edges_path, n) + ": expected two labels per line");
    if (tokens[0] == tokens[1]) throw ParseError(where(edges_path, n) + ": self-loop on '" + tokens[0] + "'");
    Edge e{intern(tokens[0], n), intern(tokens[1], n)};
    if (e.first > e.second) std::swap(e.first, e.second);
    if (!seen.insert(e).second) continue;  // the same undirected edge listed twice
    edges.push_back(e);
  }
  if (labels.empty()) throw ParseError(edges_path.string() + ": no nodes");

  std::optional<std::vector<std::size_t>> cluster_of;
  if (clusters_path) {
    const auto cl = text::read_lines(*clusters_path);
    std::vector<std::optional<std::size_t>> assigned(labels.size());
    for (std::size_t n = 0; n < cl.size(); ++n) {
      const std::string_view line = text::trim(cl[n]);
      if (line.empty() || line.front() == '#') continue;
      const auto tokens = text::split_whitespace(line);
      if (tokens.size() != 2) throw ParseError(where(*clusters_path, n) + ": expected 'label<TAB>cluster'");
      const auto it = index.find(tokens[0]);
      if (it == index.end())
        throw ParseError(where(*clusters_path, n) + ": unknown label '" + tokens[0] + "'");
      try {
        assigned[it->second] = text::parse_uint(tokens[1], "cluster index");
      } catch (const std::invalid_argument& e) {
        throw ParseError(where(*clusters_path, n) + ": " + e.what());
      }
    }
    cluster_of.emplace();
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (!assigned[j]) throw ParseError(clusters_path->string() + ": no cluster for '" + labels[j] + "'");
      cluster_of->push_back(*assigned[j]);
    }
  }

  const std::size_t count = labels.size();
  return Graph(count, std::move(edges), std::move(cluster_of), std::move(labels));
}

void write_edge_list(const Graph& g, const std::filesystem::path& edges_path,
                     const std::optional<std::filesystem::path>& clusters_path) {
  std::string out(kNodesHeader);
  for (const auto& l : g.labels()) {
    out += ' ';
    out += l;
  }
  out += '\n';
  for (const auto& e : g.edges()) {
    out += g.label(e.first);
    out += ' ';
    out += g.label(e.second);
    out += '\n';
  }
  text::write_file(edges_path, out);

  if (clusters_path && g.has_clusters()) {
    std::string cl;
    for (NodeIndex j = 0; j < g.node_count(); ++j)
      cl += g.label(j) + '\t' + std::to_string(g.cluster_of(j)) + '\n';
    text::write_file(*clusters_path, cl);
  }
}

}  // namespace covert
