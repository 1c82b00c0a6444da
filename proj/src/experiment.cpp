// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/experiment.hpp"

#include "covert/error.hpp"
#include "covert/heuristic.hpp"
#include "covert/random.hpp"
#include "covert/text.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace covert {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kPatternStream = 1;
constexpr std::uint64_t kClusteringStream = 2;

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find(',', start), s.size());
    const auto piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view s) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_commas(s)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(text::parse_uint(item, "seeds"));
      continue;
    }
    const auto lo = text::parse_uint(std::string_view(item).substr(0, dash), "seeds");
    const auto hi = text::parse_uint(std::string_view(item).substr(dash + 1), "seeds");
    if (hi < lo) throw std::invalid_argument("seeds: empty range '" + item + "'");
    if (hi - lo >= 1000000) throw std::invalid_argument("seeds: range too large '" + item + "'");
    for (auto v = lo; v <= hi; ++v) seeds.push_back(v);
  }
  return seeds;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::size_t method_clusters(const ExperimentConfig& cfg, const MethodSpec& m) {
  return m.clusters == 0 ? cfg.heuristic_clusters : m.clusters;
}

double peak(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

std::string plot_script(const ExperimentResult& result) {
  std::string s =
      "# gnuplot script: mean retrieval curves against the oracle limit and random retrieval.\n"
      "# Run from this directory: gnuplot plot.gp\n"
      "set datafile separator ','\n"
      "set terminal pngcairo size 1200,400\n"
      "set xlabel 'D_r / D'\n"
      "set yrange [0:1.05]\n"
      "set key bottom right autotitle columnhead\n";
  const char* measures[][2] = {{"precision", "2"}, {"recall", "3"}, {"f", "4"}};
  for (const auto& m : result.methods) {
    const std::string file = "curves-" + m.name() + ".csv";
    s += "set output '" + m.name() + ".png'\n";
    s += "set multiplot layout 1,3 title '" + m.name() + "'\n";
    s += "stats '" + file + "' using 1 nooutput\n";
    s += "total = STATS_max\n";
    for (int k = 0; k < 3; ++k) {
      const int base = std::stoi(measures[k][1]);
      s += "set title '" + std::string(measures[k][0]) + "'\n";
      s += "plot '" + file + "' using ($1/total):" + std::to_string(base) + " with lines lw 2 title '" +
           m.name() + "', \\\n";
      s += "     '' using ($1/total):" + std::to_string(base + 3) + " with lines dt 2 title 'limit', \\\n";
      s += "     '' using ($1/total):" + std::to_string(base + 6) + " with lines dt 3 title 'random'\n";
    }
    s += "unset multiplot\n";
  }
  return s;
}

}  // namespace

CovertSelection parse_covert_selection(std::string_view t) {
  t = text::trim(t);
  CovertSelection sel;
  if (t == "hub") {
    sel.kind = CovertSelection::Kind::kHub;
  } else if (t == "peripheral") {
    sel.kind = CovertSelection::Kind::kPeripheral;
  } else {
    sel.kind = CovertSelection::Kind::kLabels;
    sel.labels = split_commas(t);
    if (sel.labels.empty()) throw std::invalid_argument("covert: empty selection");
  }
  return sel;
}

std::string to_string(const CovertSelection& sel) {
  switch (sel.kind) {
    case CovertSelection::Kind::kHub: return "hub";
    case CovertSelection::Kind::kPeripheral: return "peripheral";
    case CovertSelection::Kind::kLabels: return join(sel.labels, ',');
  }
  return {};
}

std::vector<NodeIndex> select_covert(const Graph& g, const CovertSelection& sel) {
  std::vector<NodeIndex> out;
  switch (sel.kind) {
    case CovertSelection::Kind::kHub: out.push_back(max_degree_node(g)); break;
    case CovertSelection::Kind::kPeripheral: out.push_back(min_degree_node(g)); break;
    case CovertSelection::Kind::kLabels:
      for (const auto& l : sel.labels) {
        const auto idx = g.find_label(l);
        if (!idx) throw std::invalid_argument("covert label '" + l + "' is not a node of the network");
        out.push_back(*idx);
      }
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("covert set is empty");
  if (out.size() >= g.node_count()) throw std::invalid_argument("covert set must leave at least one overt node");
  return out;
}

std::string MethodSpec::name() const {
  if (kind == Kind::kMle) return "mle";
  return clusters == 0 ? "heuristic" : "heuristic-" + std::to_string(clusters);
}

MethodSpec parse_method(std::string_view t) {
  t = text::trim(t);
  if (t == "mle") return {MethodSpec::Kind::kMle, 0};
  if (t == "heuristic") return {MethodSpec::Kind::kHeuristic, 0};
  constexpr std::string_view prefix = "heuristic:";
  if (t.substr(0, prefix.size()) == prefix) {
    const auto c = text::parse_uint(t.substr(prefix.size()), "heuristic cluster count");
    if (c == 0) throw std::invalid_argument("heuristic cluster count must be positive");
    return {MethodSpec::Kind::kHeuristic, static_cast<std::size_t>(c)};
  }
  throw std::invalid_argument("unknown method '" + std::string(t) + "' (expected mle, heuristic or heuristic:<C>)");
}

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
  std::vector<std::uint64_t> s;
  for (std::uint64_t v = 1; v <= 20; ++v) s.push_back(v);
  return s;
}

void set_option(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = text::trim(key);
  value = text::trim(value);
  const auto uint = [&] { return static_cast<std::size_t>(text::parse_uint(value, key)); };
  const auto real = [&] { return text::parse_double(value, key); };
  if (key == "edges") {
    if (value.empty()) cfg.edge_list.reset(); else cfg.edge_list = std::filesystem::path(value);
  } else if (key == "cluster-file") {
    if (value.empty()) cfg.cluster_file.reset(); else cfg.cluster_file = std::filesystem::path(value);
  } else if (key == "nodes") {
    cfg.synthesis.node_count = uint();
  } else if (key == "clusters") {
    cfg.synthesis.cluster_count = uint();
  } else if (key == "eta") {
    cfg.synthesis.contrast = real();
  } else if (key == "min-links") {
    cfg.synthesis.min_links_per_node = uint();
  } else if (key == "max-links") {
    cfg.synthesis.max_links_per_node = uint();
  } else if (key == "initial-edges") {
    cfg.synthesis.initial_intercluster_edges = uint();
  } else if (key == "covert") {
    cfg.covert = parse_covert_selection(value);
  } else if (key == "logs") {
    cfg.log_count = uint();
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& m : split_commas(value)) cfg.methods.push_back(parse_method(m));
  } else if (key == "heuristic-clusters") {
    cfg.heuristic_clusters = uint();
  } else if (key == "optimizer") {
    const auto v = text::trim(value);
    if (v == "natural")
      cfg.fit.direction = FitConfig::Direction::kNatural;
    else if (v == "plain")
      cfg.fit.direction = FitConfig::Direction::kPlain;
    else
      throw std::invalid_argument("optimizer must be natural or plain, got '" + std::string(v) + "'");
  } else if (key == "learning-rate") {
    cfg.fit.learning_rate = real();
  } else if (key == "max-iters") {
    cfg.fit.max_iterations = uint();
  } else if (key == "tol") {
    cfg.fit.tolerance = real();
  } else if (key == "eps") {
    cfg.fit.floor = real();
  } else if (key == "seeds") {
    cfg.seeds = parse_seed_list(value);
  } else if (key == "threads") {
    cfg.threads = uint();
  } else {
    throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  ExperimentConfig cfg;
  const auto lines = text::read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 'key = value'");
    try {
      set_option(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": " + e.what());
    }
  }
  return cfg;
}

std::string format_experiment_config(const ExperimentConfig& cfg) {
  std::vector<std::string> methods, seeds;
  for (const auto& m : cfg.methods)
    methods.push_back(m.kind == MethodSpec::Kind::kMle ? "mle"
                      : m.clusters == 0                 ? "heuristic"
                                                        : "heuristic:" + std::to_string(m.clusters));
  for (const auto s : cfg.seeds) seeds.push_back(std::to_string(s));
  const auto& sy = cfg.synthesis;
  std::string out;
  const auto kv = [&](std::string_view k, const std::string& v) {
    out += std::string(k) + " = " + v + '\n';
  };
  kv("edges", cfg.edge_list ? cfg.edge_list->string() : "");
  kv("cluster-file", cfg.cluster_file ? cfg.cluster_file->string() : "");
  kv("nodes", std::to_string(sy.node_count));
  kv("clusters", std::to_string(sy.cluster_count));
  kv("eta", text::format_double(sy.contrast));
  kv("min-links", std::to_string(sy.min_links_per_node));
  kv("max-links", std::to_string(sy.max_links_per_node));
  kv("initial-edges", std::to_string(sy.initial_intercluster_edges));
  kv("covert", to_string(cfg.covert));
  kv("logs", std::to_string(cfg.log_count));
  kv("methods", join(methods, ','));
  kv("heuristic-clusters", std::to_string(cfg.heuristic_clusters));
  kv("optimizer", cfg.fit.direction == FitConfig::Direction::kNatural ? "natural" : "plain");
  kv("learning-rate", text::format_double(cfg.fit.learning_rate));
  kv("max-iters", std::to_string(cfg.fit.max_iterations));
  kv("tol", text::format_double(cfg.fit.tolerance));
  kv("eps", text::format_double(cfg.fit.floor));
  kv("seeds", join(seeds, ','));
  kv("threads", std::to_string(cfg.threads));
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.log_count == 0) throw std::invalid_argument("logs (D) must be at least 1");
  if (cfg.methods.empty()) throw std::invalid_argument("at least one method is required");
  if (cfg.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (cfg.threads == 0) throw std::invalid_argument("threads must be at least 1");
  if (cfg.heuristic_clusters == 0) throw std::invalid_argument("heuristic-clusters must be positive");
  if (cfg.cluster_file && !cfg.edge_list) throw std::invalid_argument("cluster-file needs edges");
  if (!cfg.edge_list) covert::validate(cfg.synthesis);
  covert::validate(cfg.fit);
  std::vector<std::string> names;
  for (const auto& m : cfg.methods) names.push_back(m.name());
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw std::invalid_argument("a method is listed twice");
}

Graph build_graph(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.edge_list) return read_edge_list(*cfg.edge_list, cfg.cluster_file);
  SynthesisConfig sc = cfg.synthesis;
  sc.seed = seed;
  return synthesize(sc);
}

LogDataset generate_dataset(const ExperimentConfig& cfg, const Graph& g, std::span<const NodeIndex> covert,
                            std::uint64_t seed) {
  const auto patterns = generate_patterns(theta_from_graph(g), cfg.log_count, derive_seed(seed, kPatternStream));
  return project_logs(patterns, covert, g.labels());
}

RankingResult rank_logs(const ExperimentConfig& cfg, const MethodSpec& method, const LogDataset& ds,
                        std::uint64_t seed, FitResult* fit_out) {
  if (method.kind == MethodSpec::Kind::kMle) {
    FitResult fr = fit(ds, cfg.fit);
    RankingResult ranking = score_logs(fr, ds);
    if (fit_out) *fit_out = std::move(fr);
    return ranking;
  }
  return heuristic_rank(ds, method_clusters(cfg, method), derive_seed(seed, kClusteringStream));
}

SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::optional<Graph>& loaded) {
  SeedRun run;
  run.seed = seed;
  run.graph = loaded ? *loaded : build_graph(cfg, seed);
  run.covert = select_covert(run.graph, cfg.covert);
  run.dataset.emplace(generate_dataset(cfg, run.graph, run.covert, seed));
  const LogDataset& ds = *run.dataset;
  run.targets = count_targets(ds);
  if (run.targets == 0) {
    run.skipped = true;
    return run;
  }
  for (const auto& m : cfg.methods) {
    run.rankings.push_back(rank_logs(cfg, m, ds, seed));
    run.curves.push_back(evaluate(run.rankings.back(), ds));
  }
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::optional<Graph> loaded;
  if (cfg.edge_list) loaded.emplace(read_edge_list(*cfg.edge_list, cfg.cluster_file));

  ExperimentResult result;
  result.methods = cfg.methods;
  const std::size_t count = cfg.seeds.size();
  std::vector<std::optional<SeedRun>> runs(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        runs[k].emplace(run_seed(cfg, cfg.seeds[k], loaded));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(cfg.threads, count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (auto& r : runs) result.runs.push_back(std::move(*r));
  for (const auto& r : result.runs) result.skipped_seeds += r.skipped ? 1 : 0;
  if (result.skipped_seeds == result.runs.size())
    throw StateError("every seed produced zero target logs; nothing to evaluate");

  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    std::vector<EvalCurves> per_seed;
    for (const auto& r : result.runs)
      if (!r.skipped) per_seed.push_back(r.curves[m]);
    result.summaries.push_back(summarize(per_seed));
  }
  return result;
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir.string() + ": " + ec.message());

  for (const auto& r : result.runs) {
    const auto dir = out_dir / ("seed-" + std::to_string(r.seed));
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    write_edge_list(r.graph, dir / "graph.edges", dir / "graph.clusters");
    write_dataset(*r.dataset, dir / "logs.txt", dir / "patterns.txt");
    for (std::size_t m = 0; m < r.rankings.size(); ++m) {
      write_ranking(r.rankings[m], dir / ("ranking-" + result.methods[m].name() + ".csv"));
      write_curves(r.curves[m], dir / ("curves-" + result.methods[m].name() + ".csv"));
    }
  }
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    const auto name = result.methods[m].name();
    write_curves(result.summaries[m].mean, out_dir / ("curves-" + name + ".csv"));
    write_curve_stddev(result.summaries[m].stddev, out_dir / ("curves-" + name + "-sd.csv"));
  }
  text::write_file(out_dir / "plot.gp", plot_script(result));

  std::string manifest =
      "# Experiment manifest. Re-run with: covert experiment --config manifest.txt --out <dir>\n";
  manifest += format_experiment_config(cfg);
  manifest += "# per-seed: seed covert targets status\n";
  for (const auto& r : result.runs) {
    std::vector<std::string> labels;
    for (const auto c : r.covert) labels.push_back(r.graph.label(c));
    manifest += "#   " + std::to_string(r.seed) + ' ' + join(labels, ',') + ' ' + std::to_string(r.targets) + ' ' +
                (r.skipped ? "skipped" : "ok") + '\n';
  }
  manifest += "# skipped seeds: " + std::to_string(result.skipped_seeds) + '\n';
  for (std::size_t m = 0; m < result.methods.size(); ++m)
    manifest += "# mean F peak " + result.methods[m].name() + ": " +
                text::format_double(peak(result.summaries[m].mean.ranked.f_measure)) + '\n';
  text::write_file(out_dir / "manifest.txt", manifest);
}

std::string describe(const ExperimentResult& result) {
  std::string s = "seeds: " + std::to_string(result.runs.size()) + " (skipped " +
                  std::to_string(result.skipped_seeds) + ")\n";
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    const auto& mean = result.summaries[m].mean;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s mean F peak %.3f (limit %.3f, random %.3f), mean D_t %zu\n",
                  result.methods[m].name().c_str(), peak(mean.ranked.f_measure), peak(mean.limit.f_measure),
                  peak(mean.random.f_measure), mean.targets);
    s += buf;
  }
  return s;
}

}  // namespace covert
