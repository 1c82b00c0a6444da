// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/error.hpp"
#include "covert/graph.hpp"
#include "covert/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

using namespace covert;

namespace {

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

Graph path3() { return Graph(3, {{0, 1}, {1, 2}}); }

Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t k = 1; k <= leaves; ++k) e.push_back({0, k});
  return Graph(leaves + 1, e);
}

Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t k = 0; k < n; ++k) e.push_back({k, (k + 1) % n});
  return Graph(n, e);
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (uniform01(rng) < p) e.push_back({a, b});
  return Graph(n, e);
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("covert-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("edges are normalised and validated") {
  const Graph g(3, {{2, 0}, {1, 2}});
  CHECK(g.edges()[0] == Edge{0, 2});
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {}, std::vector<std::size_t>{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {}, std::nullopt, {"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {}, std::nullopt, {"a", "b c"}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {}, std::nullopt, {"#a", "b"}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {}).cluster_of(0), StateError);
}

TEST_CASE("labels default to indices and can be looked up") {
  const Graph g(2, {{0, 1}});
  CHECK(g.label(1) == "1");
  const Graph h(2, {{0, 1}}, std::nullopt, {"x", "y"});
  CHECK(h.find_label("y") == NodeIndex{1});
  CHECK_FALSE(h.find_label("z").has_value());
  CHECK_THROWS_AS(h.label(2), std::out_of_range);
}

TEST_CASE("degree") {
  CHECK(degree(triangle(), 0) == 2);
  CHECK(degree(Graph(4, {}), 3) == 0);
  CHECK(degree(path3(), 1) == 2);
  CHECK_THROWS_AS(degree(path3(), 3), std::out_of_range);
}

TEST_CASE("clustering coefficient") {
  CHECK(clustering_coefficient(triangle(), 1) == 1.0);
  CHECK(clustering_coefficient(star(4), 0) == 0.0);
  // 4-cycle a-b-c-d-a plus chord a-c; a's neighbours {b,c,d} share edges b-c and c-d.
  const Graph chord(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  CHECK(clustering_coefficient(chord, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(clustering_coefficient(path3(), 0) == 0.0);  // degree 1
  CHECK_THROWS_AS(clustering_coefficient(path3(), 5), std::out_of_range);
}

TEST_CASE("gini") {
  CHECK(gini_degree(cycle(6)) == 0.0);
  const std::vector<double> equal{1, 1, 1, 1};
  CHECK(gini(equal) == 0.0);
  const std::vector<double> two{0, 4};
  CHECK(gini(two) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gini_degree(Graph(3, {})) == 0.0);
}

TEST_CASE("gini matches the pairwise definition on random sequences") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(1 + uniform_index(rng, 12));
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 20));
    const double g = gini(x);
    CHECK(g == doctest::Approx(oracle::pairwise_gini(x)).epsilon(1e-12));
    CHECK(g >= 0.0);
    CHECK(g < 1.0);
  }
}

TEST_CASE("graph stats") {
  const auto s = graph_stats(triangle());
  CHECK(s.avg_degree == 2.0);
  CHECK(s.avg_clustering == 1.0);
  CHECK(s.gini == 0.0);
}

TEST_CASE("hub and peripheral selection break ties by lowest index") {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(max_degree_node(g) == 1);
  CHECK(min_degree_node(g) == 0);
  CHECK(max_degree_node(star(3)) == 0);
}

TEST_CASE("graph properties on random graphs") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + uniform_index(rng, 15);
    const Graph g = random_graph(n, 0.3, rng);
    std::size_t degree_sum = 0;
    for (NodeIndex v = 0; v < n; ++v) degree_sum += degree(g, v);
    CHECK(degree_sum == 2 * g.edge_count());
    const auto s = graph_stats(g);
    CHECK(s.avg_degree == doctest::Approx(2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n)));
    CHECK(s.avg_clustering >= 0.0);
    CHECK(s.avg_clustering <= 1.0);

    // Relabelling nodes permutes clustering coefficients.
    std::vector<NodeIndex> perm(n);
    std::iota(perm.begin(), perm.end(), NodeIndex{0});
    shuffle(perm, rng);
    std::vector<Edge> moved;
    for (const auto& e : g.edges()) moved.push_back({perm[e.first], perm[e.second]});
    const Graph h(n, moved);
    for (NodeIndex v = 0; v < n; ++v)
      CHECK(clustering_coefficient(h, perm[v]) == doctest::Approx(clustering_coefficient(g, v)));

    // A disjoint union of two copies keeps <K> and <W>.
    std::vector<Edge> doubled(g.edges().begin(), g.edges().end());
    for (const auto& e : g.edges()) doubled.push_back({e.first + n, e.second + n});
    const auto u = graph_stats(Graph(2 * n, doubled));
    CHECK(u.avg_degree == doctest::Approx(s.avg_degree));
    CHECK(u.avg_clustering == doctest::Approx(s.avg_clustering));
  }
}

TEST_CASE("edge list round trip keeps labels, isolated nodes and clusters") {
  const auto dir = temp_dir("graph-io");
  const Graph g(4, {{0, 1}, {1, 2}}, std::vector<std::size_t>{0, 1, 0, 1}, {"a", "b", "c", "lonely"});
  write_edge_list(g, dir / "g.edges", dir / "g.clusters");
  const Graph h = read_edge_list(dir / "g.edges", dir / "g.clusters");
  CHECK(h.node_count() == 4);
  CHECK(h.label(3) == "lonely");
  CHECK(h.edge_count() == 2);
  CHECK(h.has_edge(0, 1));
  CHECK(h.cluster_of(2) == 0);
  CHECK(h.cluster_of(3) == 1);
}

TEST_CASE("edge lists without a header index nodes by first appearance") {
  const auto dir = temp_dir("graph-plain");
  {
    std::ofstream os(dir / "plain.edges");
    os << "# a comment\nx y\n\ny z\nz x\nx y\n";
  }
  const Graph g = read_edge_list(dir / "plain.edges");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);  // the repeated x-y is ignored
  CHECK(g.label(0) == "x");
  CHECK(g.label(2) == "z");
  {
    std::ofstream os(dir / "bad.edges");
    os << "x x\n";
  }
  CHECK_THROWS_AS(read_edge_list(dir / "bad.edges"), ParseError);
  {
    std::ofstream os(dir / "three.edges");
    os << "x y z\n";
  }
  CHECK_THROWS_AS(read_edge_list(dir / "three.edges"), ParseError);
  CHECK_THROWS_AS(read_edge_list(dir / "missing.edges"), IoError);
}
