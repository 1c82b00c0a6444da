// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/graph.hpp"
#include "covert/mle.hpp"
#include "covert/random.hpp"
#include "covert/ranking.hpp"
#include "covert/transmission.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>

using namespace covert;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> labels_of(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("v" + std::to_string(j));
  return out;
}

bool satisfies_constraints(const Theta& t, double eps) {
  double sum = 0.0;
  for (double f : t.initiation) {
    if (f < eps) return false;
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) return false;
  for (NodeIndex j = 0; j < t.size(); ++j)
    for (NodeIndex k = 0; k < t.size(); ++k)
      if (j != k && (t.r(j, k) < eps || t.r(j, k) > 1.0 - eps)) return false;
  return true;
}

}  // namespace

TEST_CASE("log probability: worked examples") {
  Theta t(2);
  t.r(0, 1) = t.r(1, 0) = 1.0;
  const std::vector<std::uint8_t> both{1, 1};
  CHECK(log_probability(t, both) == 0.0);
  const std::vector<std::uint8_t> none{0, 0};
  CHECK(log_probability(t, none) == -kInf);
  const std::vector<std::uint8_t> one{1, 0};
  CHECK(log_probability(t, one) == -kInf);  // r = 1 forces the other node in
  const std::vector<std::uint8_t> wrong{1, 1, 0};
  CHECK_THROWS_AS(log_probability(t, wrong), std::invalid_argument);
}

TEST_CASE("log probability matches exhaustive enumeration") {
  Rng rng(2024);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const Theta t = oracle::random_theta(n, rng, 0.0, 1.0);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const double expected = oracle::enumerate_probability(t, mask);
        const double got = log_probability(t, oracle::mask_row(mask, n));
        if (expected == 0.0) {
          CHECK(got == -kInf);
        } else {
          CHECK(std::abs(std::exp(got) - expected) < 1e-12);
          CHECK(std::abs(got - std::log(expected)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("log probability handles boundary parameters") {
  // r exactly 0 or 1 on some pairs: zero factors must not poison other initiators.
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 4);
    Theta t = oracle::random_theta(n, rng);
    for (NodeIndex j = 0; j < n; ++j)
      for (NodeIndex k = 0; k < n; ++k)
        if (j != k && uniform01(rng) < 0.4) t.r(j, k) = uniform01(rng) < 0.5 ? 0.0 : 1.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const double expected = oracle::enumerate_probability(t, mask);
      const double got = log_probability(t, oracle::mask_row(mask, n));
      if (expected == 0.0)
        CHECK(got == -kInf);
      else
        CHECK(std::abs(std::exp(got) - expected) < 1e-12);
    }
  }
}

TEST_CASE("log likelihood sums independent logs") {
  Theta t(2);
  t.r(0, 1) = t.r(1, 0) = 1.0;
  CHECK(log_likelihood(t, LogDataset(labels_of(2), {{0, 1}})) == 0.0);

  Rng rng(3);
  const Theta u = oracle::random_theta(4, rng);
  const LogDataset once(labels_of(4), {{0, 2, 3}});
  const LogDataset twice(labels_of(4), {{0, 2, 3}, {0, 2, 3}});
  CHECK(log_likelihood(u, twice) == doctest::Approx(2.0 * log_likelihood(u, once)).epsilon(1e-15));

  const auto ds = oracle::random_dataset(4, 6, rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < ds.log_count(); ++i) {
    std::uint32_t mask = 0;
    for (const auto j : ds.log(i)) mask |= 1u << j;
    expected += std::log(oracle::enumerate_probability(u, mask));
  }
  CHECK(std::abs(log_likelihood(u, ds) - expected) < 1e-12);

  const LogDataset with_empty(labels_of(4), {{0}, {}});
  CHECK(log_likelihood(u, with_empty) == -kInf);
}

TEST_CASE("analytic gradients agree with finite differences") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 4);
    const std::size_t d = 3 + uniform_index(rng, 8);
    const Theta t = oracle::random_theta(n, rng);
    const auto ds = oracle::random_dataset(n, d, rng);
    const auto analytic = gradients(t, ds);
    const auto numeric = oracle::finite_difference_gradient(t, ds);
    for (std::size_t j = 0; j < n; ++j) CHECK(oracle::relative_error(analytic.initiation[j], numeric.initiation[j]) < 1e-6);
    for (std::size_t a = 0; a < n * n; ++a)
      CHECK(oracle::relative_error(analytic.transmission[a], numeric.transmission[a]) < 1e-6);
  }
}

TEST_CASE("gradient special cases") {
  Theta t(3);
  for (NodeIndex j = 0; j < 3; ++j)
    for (NodeIndex k = 0; k < 3; ++k)
      if (j != k) t.r(j, k) = 0.5;
  const LogDataset sym(labels_of(3), {{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}});
  const auto g = gradients(t, sym);
  CHECK(g.initiation[0] == doctest::Approx(g.initiation[1]));
  CHECK(g.initiation[1] == doctest::Approx(g.initiation[2]));

  const LogDataset absent(labels_of(3), {{0, 1}, {1}});
  CHECK(gradients(t, absent).initiation[2] == 0.0);

  const LogDataset impossible(labels_of(3), {{0}, {}});
  CHECK_THROWS_AS(gradients(t, impossible), std::domain_error);
}

TEST_CASE("floored renormalisation") {
  std::vector<double> v{2.0, 1.0, 1.0};
  normalize_with_floor(v, 1e-3);
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.25));

  std::vector<double> w{1.0, -0.3, 1e-9, 0.0};
  normalize_with_floor(w, 0.01);
  CHECK(w[1] == 0.01);
  CHECK(w[2] == 0.01);
  CHECK(w[3] == 0.01);
  CHECK(w[0] == doctest::Approx(0.97));
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> flat{-1.0, -2.0};
  normalize_with_floor(flat, 0.1);
  CHECK(flat[0] == 0.5);
  std::vector<double> tight{1.0, 1.0};
  CHECK_THROWS_AS(normalize_with_floor(tight, 0.5), std::invalid_argument);
}

TEST_CASE("initial theta follows appearance and co-occurrence counts") {
  const LogDataset ds(labels_of(3), {{0, 1}, {0}, {0, 2}, {1}});
  const Theta t = initial_theta(ds, 1e-6);
  CHECK(t.f(0) == doctest::Approx(3.0 / 6.0));
  CHECK(t.f(1) == doctest::Approx(2.0 / 6.0));
  CHECK(t.r(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(t.r(1, 0) == doctest::Approx(1.0 / 2.0));
  CHECK(t.r(1, 2) == 1e-6);
  CHECK(satisfies_constraints(t, 1e-6));
}

TEST_CASE("fit: config checks and degenerate inputs") {
  FitConfig bad;
  bad.floor = 0.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = {};
  bad.learning_rate = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = {};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_THROWS_AS(fit(LogDataset(labels_of(2), {{}, {}}), FitConfig{}), std::invalid_argument);
}

TEST_CASE("fit with zero learning rate keeps the initial theta") {
  const LogDataset ds(labels_of(3), {{0, 1}, {2}, {0, 1, 2}});
  FitConfig cfg;
  cfg.learning_rate = 0.0;
  const auto r = fit(ds, cfg);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  const Theta init = initial_theta(ds, cfg.floor);
  CHECK(r.theta.initiation == init.initiation);
  CHECK(r.theta.transmission == init.transmission);
}

TEST_CASE("fit on a single singleton log pushes parameters to the boundary") {
  const std::size_t n = 4;
  const LogDataset ds(labels_of(n), {{0}});
  FitConfig cfg;
  const auto r = fit(ds, cfg);
  const double eps = cfg.floor;
  CHECK(r.theta.f(0) == doctest::Approx(1.0 - static_cast<double>(n - 1) * eps).epsilon(1e-9));
  for (NodeIndex k = 1; k < n; ++k) {
    CHECK(r.theta.r(0, k) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(r.theta.f(k) == doctest::Approx(eps).epsilon(1e-9));
  }
}

TEST_CASE("fit ascends monotonically and stays feasible") {
  for (const auto direction : {FitConfig::Direction::kNatural, FitConfig::Direction::kPlain}) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 3 + uniform_index(rng, 5);
      const auto ds = oracle::random_dataset(n, 5 + uniform_index(rng, 20), rng);
      FitConfig cfg;
      cfg.direction = direction;
      cfg.max_iterations = 200;
      const auto r = fit(ds, cfg);
      REQUIRE(r.log_likelihood_trace.size() == r.iterations + 1);
      for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
        CHECK(r.log_likelihood_trace[i] >= r.log_likelihood_trace[i - 1]);
      CHECK(r.log_likelihood_trace.back() == doctest::Approx(log_likelihood(r.theta, ds)));
      CHECK(satisfies_constraints(r.theta, cfg.floor));
    }
  }
}

TEST_CASE("a unit natural step is one expectation-maximization update") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 4);
    const auto ds = oracle::random_dataset(n, 4 + uniform_index(rng, 12), rng);
    FitConfig cfg;
    cfg.max_iterations = 1;
    const auto r = fit(ds, cfg);
    const Theta expected = oracle::em_update(initial_theta(ds, cfg.floor), ds, cfg.floor);
    // EM never lowers the likelihood, so the full step is always accepted.
    for (NodeIndex j = 0; j < n; ++j) CHECK(r.theta.f(j) == doctest::Approx(expected.f(j)).epsilon(1e-12));
    for (std::size_t a = 0; a < expected.transmission.size(); ++a)
      CHECK(r.theta.transmission[a] == doctest::Approx(expected.transmission[a]).epsilon(1e-12));
  }
}

TEST_CASE("the plain direction stays available and also recovers a clean topology") {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
  const auto ds = project_logs(generate_patterns(theta_from_graph(g), 500, 2), {}, g.labels());
  FitConfig plain;
  plain.direction = FitConfig::Direction::kPlain;
  plain.learning_rate = 0.1;
  const auto p = fit(ds, plain);
  const auto q = fit(ds, FitConfig{});
  CHECK(q.log_likelihood_trace.back() >= p.log_likelihood_trace.back() - 1e-6);
  for (NodeIndex j = 0; j < 5; ++j)
    for (NodeIndex k = 0; k < 5; ++k)
      if (j != k) CHECK((p.theta.r(j, k) > 0.5) == g.has_edge(j, k));
}

TEST_CASE("fit ignores empty logs, which then rank first") {
  const LogDataset ds(labels_of(3), {{0, 1}, {}, {1, 2}, {0, 1}});
  const auto r = fit(ds, FitConfig{});
  CHECK(std::isfinite(r.log_likelihood_trace.back()));
  const auto ranking = score_logs(r, ds);
  CHECK(ranking.scores[1] == kInf);
  CHECK(ranking.order[0] == 1);
  // Identical logs get identical scores and keep index order.
  CHECK(ranking.scores[0] == ranking.scores[3]);
  const auto pos0 = std::find(ranking.order.begin(), ranking.order.end(), 0) - ranking.order.begin();
  const auto pos3 = std::find(ranking.order.begin(), ranking.order.end(), 3) - ranking.order.begin();
  CHECK(pos0 < pos3);
}

TEST_CASE("a certain log scores zero and ranks last") {
  const LogDataset ds(labels_of(2), {{0, 1}, {0, 1}});
  FitResult fr;
  fr.theta = Theta(2);
  fr.theta.r(0, 1) = fr.theta.r(1, 0) = 1.0;
  const auto ranking = score_logs(fr, ds);
  CHECK(ranking.scores[0] == 0.0);
  CHECK(ranking.order.back() == 1);
}

TEST_CASE("ranking by -log p equals ranking by 1/p") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 3);
    const auto ds = oracle::random_dataset(n, 15, rng);
    FitResult fr;
    fr.theta = oracle::random_theta(n, rng);
    const auto by_log = score_logs(fr, ds);
    std::vector<double> inverse;
    for (std::size_t i = 0; i < ds.log_count(); ++i) inverse.push_back(1.0 / std::exp(log_probability(fr.theta, ds, i)));
    CHECK(rank_by_score(inverse).order == by_log.order);
  }
}

TEST_CASE("permuting logs permutes scores") {
  Rng rng(12);
  const auto ds = oracle::random_dataset(5, 30, rng);
  std::vector<std::size_t> perm(ds.log_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(perm, rng);
  std::vector<std::vector<NodeIndex>> rows;
  for (const auto i : perm) rows.emplace_back(ds.log(i).begin(), ds.log(i).end());
  const LogDataset shuffled(std::vector<std::string>(ds.labels().begin(), ds.labels().end()), rows);
  FitConfig cfg;
  cfg.max_iterations = 300;
  const auto a = mle_scores(fit(ds, cfg), ds);
  const auto b = mle_scores(fit(shuffled, cfg), shuffled);
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(b[i] == doctest::Approx(a[perm[i]]).epsilon(1e-6));
}

TEST_CASE("fit recovers a small known topology") {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
  const auto pats = generate_patterns(theta_from_graph(g), 500, 1);
  const auto ds = project_logs(pats, {}, g.labels());
  const auto r = fit(ds, FitConfig{});
  for (NodeIndex j = 0; j < 5; ++j)
    for (NodeIndex k = 0; k < 5; ++k)
      if (j != k) CHECK((r.theta.r(j, k) > 0.5) == g.has_edge(j, k));
}

TEST_CASE("fit dump files") {
  const auto dir = std::filesystem::temp_directory_path() / "covert-test-fit";
  std::filesystem::create_directories(dir);
  const LogDataset ds({"a", "b"}, {{0, 1}, {0}});
  const auto r = fit(ds, FitConfig{});
  write_fit(r, ds, dir / "f.csv", dir / "r.csv");
  CHECK(std::filesystem::file_size(dir / "f.csv") > 0);
  CHECK_THROWS_AS(write_fit(r, LogDataset({"a"}, {{0}}), dir / "f.csv", dir / "r.csv"), std::invalid_argument);
}
