// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/error.hpp"
#include "covert/graph.hpp"
#include "covert/random.hpp"
#include "covert/synthesis.hpp"
#include "covert/transmission.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>

using namespace covert;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("covert-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> labels_of(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("n" + std::to_string(j));
  return out;
}

}  // namespace

TEST_CASE("theta from graph") {
  const Theta tri = theta_from_graph(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  for (NodeIndex j = 0; j < 3; ++j) {
    CHECK(tri.f(j) == doctest::Approx(1.0 / 3.0));
    for (NodeIndex k = 0; k < 3; ++k)
      if (j != k) CHECK(tri.r(j, k) == 1.0);
  }
  const Theta empty = theta_from_graph(Graph(2, {}));
  CHECK(empty.f(0) == 0.5);
  CHECK(empty.r(0, 1) == 0.0);
  const Theta path = theta_from_graph(Graph(3, {{0, 1}, {1, 2}}));
  CHECK(path.r(0, 1) == 1.0);
  CHECK(path.r(1, 0) == 1.0);
  CHECK(path.r(2, 1) == 1.0);
  CHECK(path.r(0, 2) == 0.0);
  CHECK(path.r(2, 0) == 0.0);
  CHECK_NOTHROW(validate(path));
}

TEST_CASE("theta validation") {
  Theta t(2);
  t.initiation = {0.7, 0.2};
  CHECK_THROWS_AS(validate(t), std::invalid_argument);
  t.initiation = {0.5, 0.5};
  t.r(0, 1) = 1.5;
  CHECK_THROWS_AS(validate(t), std::invalid_argument);
  CHECK_THROWS_AS(generate_patterns(t, 3, 1), std::invalid_argument);
}

TEST_CASE("pattern generation edge cases") {
  const auto singles = generate_patterns(theta_from_graph(Graph(4, {})), 50, 3);
  for (const auto& p : singles) CHECK(p.members == std::vector<NodeIndex>{p.initiator});

  const auto full = generate_patterns(theta_from_graph(Graph(3, {{0, 1}, {1, 2}, {0, 2}})), 50, 3);
  for (const auto& p : full) CHECK(p.members == std::vector<NodeIndex>{0, 1, 2});

  // Star: a leaf initiator reaches only the centre.
  const auto star = generate_patterns(theta_from_graph(Graph(4, {{0, 1}, {0, 2}, {0, 3}})), 200, 9);
  for (const auto& p : star) {
    if (p.initiator == 0)
      CHECK(p.members.size() == 4);
    else
      CHECK(p.members == std::vector<NodeIndex>{0, p.initiator});
  }
}

TEST_CASE("pattern generation is deterministic and samples the initiator by f") {
  Theta t(3);
  t.initiation = {0.6, 0.3, 0.1};
  t.r(0, 1) = 0.5;
  const auto a = generate_patterns(t, 20000, 77);
  const auto b = generate_patterns(t, 20000, 77);
  std::size_t first = 0, with_one = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].members == b[i].members);
    if (a[i].initiator == 0) {
      ++first;
      with_one += a[i].members.size() == 2;
    }
  }
  CHECK(static_cast<double>(first) / 20000.0 == doctest::Approx(0.6).epsilon(0.03));
  CHECK(static_cast<double>(with_one) / static_cast<double>(first) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("projection deletes covert members") {
  // Labels from the global mujahedin example: deleting the hub leaves its eight neighbours.
  const std::vector<std::string> names{"ObL", "CS1", "CS2", "CS6", "CS7", "CS9", "CS11", "CS12", "CS14", "CS3"};
  const ActivityPattern ex{0, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
  const std::vector<NodeIndex> covert{0};
  const auto ds = project_logs(std::span(&ex, 1), covert, names);
  REQUIRE(ds.log_count() == 1);
  std::vector<std::string> got;
  for (const auto j : ds.log(0)) got.push_back(ds.label(j));
  CHECK(got == std::vector<std::string>{"CS1", "CS2", "CS6", "CS7", "CS9", "CS11", "CS12", "CS14"});
  CHECK(ds.node_count() == 9);
  CHECK(count_targets(ds) == 1);

  const ActivityPattern lone{0, {0}};
  const auto empty = project_logs(std::span(&lone, 1), covert, names);
  CHECK(empty.log(0).empty());
  CHECK(count_targets(empty) == 1);
}

TEST_CASE("target counting") {
  const auto labels = labels_of(4);
  const std::vector<ActivityPattern> pats{{0, {0, 1}}, {2, {2, 3}}, {1, {1, 3}}};
  const std::vector<NodeIndex> none;
  CHECK(count_targets(project_logs(pats, none, labels)) == 0);
  const std::vector<NodeIndex> three{3};
  CHECK(count_targets(project_logs(pats, three, labels)) == 2);
  const std::vector<NodeIndex> both{1, 3};
  CHECK(count_targets(project_logs(pats, both, labels)) == 3);
  const LogDataset bare(labels_of(2), {{0}});
  CHECK_THROWS_AS(count_targets(bare), StateError);
}

TEST_CASE("projection properties on synthesized networks") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthesisConfig sc;
    sc.seed = seed;
    const Graph g = synthesize(sc);
    const auto pats = generate_patterns(theta_from_graph(g), 300, seed);

    // Without covert nodes the matrix row sums equal the pattern sizes.
    const auto all = project_logs(pats, {}, g.labels());
    for (std::size_t i = 0; i < pats.size(); ++i) {
      std::size_t row = 0;
      for (NodeIndex j = 0; j < all.node_count(); ++j) row += all.matrix()[i * all.node_count() + j];
      CHECK(row == pats[i].members.size());
    }

    // Targets are exactly the patterns that meet the covert set.
    const std::vector<NodeIndex> covert{max_degree_node(g), 7};
    const auto ds = project_logs(pats, covert, g.labels());
    std::size_t meeting = 0;
    for (const auto& p : pats)
      meeting += std::any_of(p.members.begin(), p.members.end(),
                             [&](NodeIndex v) { return v == covert[0] || v == covert[1]; });
    CHECK(count_targets(ds) == meeting);

    // Each pattern is an initiator plus its whole neighbourhood: at most M distinct ones.
    std::set<std::vector<NodeIndex>> distinct;
    for (const auto& p : pats) {
      distinct.insert(p.members);
      CHECK(p.members.size() == degree(g, p.initiator) + 1);
    }
    CHECK(distinct.size() <= g.node_count());
  }
}

TEST_CASE("dataset matrix view and validation") {
  const LogDataset ds(labels_of(3), {{2, 0}, {}, {1}});
  CHECK(ds.log(0).size() == 2);
  CHECK(ds.log(0)[0] == 0);  // rows are kept sorted
  CHECK(ds.contains(0, 2));
  CHECK_FALSE(ds.contains(1, 0));
  CHECK(ds.appearances(0) == 1);
  CHECK_FALSE(ds.has_ground_truth());
  CHECK_THROWS_AS(LogDataset(labels_of(2), {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(LogDataset(labels_of(2), {{2}}), std::invalid_argument);
  CHECK_THROWS_AS(LogDataset({"a", "a"}, {}), std::invalid_argument);
}

TEST_CASE("dataset files round trip, including empty logs") {
  const auto dir = temp_dir("dataset");
  const auto labels = labels_of(4);
  const std::vector<ActivityPattern> pats{{3, {1, 3}}, {3, {3}}, {0, {0, 1, 2}}, {3, {3}}};
  const std::vector<NodeIndex> covert{3};
  const auto ds = project_logs(pats, covert, labels);
  write_dataset(ds, dir / "logs.txt", dir / "patterns.txt");
  const auto back = read_dataset(dir / "logs.txt", dir / "patterns.txt");
  REQUIRE(back.log_count() == 4);
  CHECK(back.log(1).empty());
  CHECK(back.log(3).empty());
  CHECK(back.ground_truth().patterns[0].initiator == 3);
  CHECK(count_targets(back) == 3);
  const auto plain = read_dataset(dir / "logs.txt");
  CHECK_FALSE(plain.has_ground_truth());
  CHECK(plain.log_count() == 4);
  CHECK_THROWS_AS(read_dataset(dir / "nope.txt"), IoError);
}
