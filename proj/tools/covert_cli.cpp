// Licensed under the Apache License 2.0 (see LICENSE file).
//
// Command-line front end. Talks to the library only through covert/covert.h.

#include "covert/covert.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(covert_status s) {
  if (s != COVERT_OK) throw Failure(std::string(covert_status_name(s)) + ": " + covert_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<covert_config, Deleter<covert_config, covert_config_free>>;
using GraphPtr = std::unique_ptr<covert_graph, Deleter<covert_graph, covert_graph_free>>;
using DatasetPtr = std::unique_ptr<covert_dataset, Deleter<covert_dataset, covert_dataset_free>>;
using RankingPtr = std::unique_ptr<covert_ranking, Deleter<covert_ranking, covert_ranking_free>>;
using FitPtr = std::unique_ptr<covert_fit, Deleter<covert_fit, covert_fit_free>>;
using CurvesPtr = std::unique_ptr<covert_curves, Deleter<covert_curves, covert_curves_free>>;
using ExperimentPtr = std::unique_ptr<covert_experiment, Deleter<covert_experiment, covert_experiment_free>>;

// Reads a string through the two-call buffer protocol.
template <class Call>
std::string fetch(Call&& call) {
  std::size_t need = 0;
  check(call(nullptr, 0, &need));
  std::string s(need, '\0');
  check(call(s.data(), s.size(), &need));
  s.resize(need - 1);
  return s;
}

std::string config_value(const covert_config* cfg, const char* key) {
  return fetch([&](char* b, std::size_t c, std::size_t* n) { return covert_config_get(cfg, key, b, c, n); });
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Options shared by every subcommand: a config file plus key overrides that
// are applied on top of it in a fixed order.
struct Common {
  std::string config_file;
  std::string out_dir;
  std::vector<std::string> sets;                    // --set key=value
  std::vector<std::pair<std::string, std::string>> flags;  // key, value from dedicated flags
  std::optional<std::uint64_t> seed;
};

// Registers --<key> as an override of the config key of the same name.
void add_key_flag(CLI::App* app, Common& common, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + key, [&common, key](const std::string& v) { common.flags.emplace_back(key, v); }, help);
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config_file, "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--out", common.out_dir, "output directory")->required();
  app->add_option("--set", common.sets, "override any configuration key (key=value), repeatable");
}

Config load_config(const Common& common) {
  covert_config* raw = nullptr;
  check(covert_config_new(&raw));
  Config cfg(raw);
  if (!common.config_file.empty()) check(covert_config_load(cfg.get(), common.config_file.c_str()));
  for (const auto& kv : common.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Failure("--set expects key=value, got '" + kv + "'");
    check(covert_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  for (const auto& [k, v] : common.flags) check(covert_config_set(cfg.get(), k.c_str(), v.c_str()));
  return cfg;
}

std::uint64_t pick_seed(const Common& common, const covert_config* cfg) {
  if (common.seed) return *common.seed;
  if (covert_config_seed_count(cfg) == 0) throw Failure("no seed given");
  std::uint64_t s = 0;
  check(covert_config_seed(cfg, 0, &s));
  return s;
}

fs::path prepare_out(const Common& common) {
  const fs::path out(common.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Failure("cannot create " + out.string() + ": " + ec.message());
  return out;
}

// manifest.txt collects "<command>.<key> = value" lines from every subcommand
// run into the same directory; re-running a command replaces its own lines.
void update_manifest(const fs::path& out, const std::string& command,
                     const std::vector<std::pair<std::string, std::string>>& entries) {
  const fs::path path = out / "manifest.txt";
  std::map<std::string, std::string> lines;
  if (std::ifstream in(path); in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      if (key.rfind(command + ".", 0) == 0) continue;
      lines[key] = line.substr(eq + 3);
    }
  }
  for (const auto& [k, v] : entries) lines[command + "." + k] = v;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Failure("cannot write " + path.string());
  os << "# covert run manifest: <command>.<key> = value\n";
  for (const auto& [k, v] : lines) os << k << " = " << v << '\n';
  if (!os) throw Failure("cannot write " + path.string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const covert_config* cfg,
                                                                std::initializer_list<const char*> keys) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const char* k : keys) out.emplace_back(k, config_value(cfg, k));
  return out;
}

std::string method_file_name(std::string method) {
  std::replace(method.begin(), method.end(), ':', '-');
  return method;
}

// ---- subcommands ----

int run_synthesize(const Common& common) {
  auto cfg = load_config(common);
  const auto seed = pick_seed(common, cfg.get());
  const auto out = prepare_out(common);
  covert_graph* raw = nullptr;
  check(covert_graph_build(cfg.get(), seed, &raw));
  GraphPtr g(raw);
  check(covert_graph_save(g.get(), (out / "graph.edges").c_str(), (out / "graph.clusters").c_str()));
  double k = 0, w = 0, gini = 0;
  check(covert_graph_stats(g.get(), &k, &w, &gini));
  auto entries = config_entries(cfg.get(), {"edges", "cluster-file", "nodes", "clusters", "eta", "min-links",
                                            "max-links", "initial-edges"});
  entries.emplace_back("seed", std::to_string(seed));
  update_manifest(out, "synthesize", entries);
  std::cout << "nodes " << covert_graph_node_count(g.get()) << " edges " << covert_graph_edge_count(g.get())
            << " <K> " << format_number(k) << " <W> " << format_number(w) << " G " << format_number(gini) << '\n';
  return 0;
}

int run_gen_logs(const Common& common) {
  auto cfg = load_config(common);
  const auto seed = pick_seed(common, cfg.get());
  const auto out = prepare_out(common);
  covert_graph* graw = nullptr;
  check(covert_graph_build(cfg.get(), seed, &graw));
  GraphPtr g(graw);
  covert_dataset* draw = nullptr;
  check(covert_dataset_generate(g.get(), cfg.get(), seed, &draw));
  DatasetPtr ds(draw);
  check(covert_dataset_save(ds.get(), (out / "logs.txt").c_str(), (out / "patterns.txt").c_str()));
  std::size_t targets = 0;
  check(covert_dataset_target_count(ds.get(), &targets));
  const auto covert_labels = fetch(
      [&](char* b, std::size_t c, std::size_t* n) { return covert_graph_covert_labels(g.get(), cfg.get(), b, c, n); });
  auto entries = config_entries(cfg.get(), {"edges", "cluster-file", "nodes", "clusters", "eta", "min-links",
                                            "max-links", "initial-edges", "covert", "logs"});
  entries.emplace_back("seed", std::to_string(seed));
  entries.emplace_back("covert-nodes", covert_labels);
  entries.emplace_back("targets", std::to_string(targets));
  update_manifest(out, "gen-logs", entries);
  std::cout << "logs " << covert_dataset_log_count(ds.get()) << " overt nodes " << covert_dataset_node_count(ds.get())
            << " covert " << covert_labels << " target logs " << targets << '\n';
  return 0;
}

struct RankArgs {
  std::string input;
  std::string method = "mle";
};

int run_rank(const Common& common, const RankArgs& args) {
  auto cfg = load_config(common);
  const auto seed = pick_seed(common, cfg.get());
  const auto out = prepare_out(common);
  const fs::path input = args.input.empty() ? out / "logs.txt" : fs::path(args.input);
  covert_dataset* draw = nullptr;
  check(covert_dataset_load(input.c_str(), nullptr, &draw));
  DatasetPtr ds(draw);
  covert_ranking* rraw = nullptr;
  covert_fit* fraw = nullptr;
  check(covert_rank(ds.get(), cfg.get(), args.method.c_str(), seed, &rraw, &fraw));
  RankingPtr ranking(rraw);
  FitPtr fit(fraw);
  const std::string name = method_file_name(args.method);
  check(covert_ranking_save(ranking.get(), (out / ("ranking-" + name + ".csv")).c_str()));
  auto entries = config_entries(cfg.get(), {"heuristic-clusters", "optimizer", "learning-rate", "max-iters", "tol", "eps"});
  entries.emplace_back("input", input.string());
  entries.emplace_back("method", args.method);
  entries.emplace_back("seed", std::to_string(seed));
  update_manifest(out, "rank-" + name, entries);
  if (fit) {
    check(covert_fit_save(fit.get(), ds.get(), (out / "fit-initiation.csv").c_str(),
                          (out / "fit-transmission.csv").c_str()));
    std::size_t iters = 0;
    int converged = 0;
    double l0 = 0, l1 = 0;
    check(covert_fit_summary(fit.get(), &iters, &converged, &l0, &l1));
    std::cout << "fit: " << iters << " iterations" << (converged ? " (converged)" : " (iteration cap)")
              << ", log-likelihood " << format_number(l0) << " -> " << format_number(l1) << '\n';
  }
  std::size_t top = 0;
  double score = 0;
  check(covert_ranking_entry(ranking.get(), 0, &top, &score));
  std::cout << "ranked " << covert_ranking_size(ranking.get()) << " logs; top log " << top << " score "
            << format_number(score) << '\n';
  return 0;
}

struct EvaluateArgs {
  std::string input;
  std::string truth;
  std::string ranking;
  std::string method = "mle";
};

int run_evaluate(const Common& common, const EvaluateArgs& args) {
  const auto out = prepare_out(common);
  const std::string name = method_file_name(args.method);
  const fs::path input = args.input.empty() ? out / "logs.txt" : fs::path(args.input);
  const fs::path truth = args.truth.empty() ? out / "patterns.txt" : fs::path(args.truth);
  const fs::path ranking_path = args.ranking.empty() ? out / ("ranking-" + name + ".csv") : fs::path(args.ranking);
  covert_dataset* draw = nullptr;
  check(covert_dataset_load(input.c_str(), truth.c_str(), &draw));
  DatasetPtr ds(draw);
  covert_ranking* rraw = nullptr;
  check(covert_ranking_load(ranking_path.c_str(), &rraw));
  RankingPtr ranking(rraw);
  covert_curves* craw = nullptr;
  check(covert_evaluate(ranking.get(), ds.get(), &craw));
  CurvesPtr curves(craw);
  check(covert_curves_save(curves.get(), (out / ("curves-" + name + ".csv")).c_str()));
  update_manifest(out, "evaluate-" + name,
                  {{"input", input.string()}, {"truth", truth.string()}, {"ranking", ranking_path.string()}});
  double peak = 0, peak_limit = 0, peak_random = 0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < covert_curves_length(curves.get()); ++i) {
    double row[9];
    check(covert_curves_row(curves.get(), i, row));
    if (row[2] > peak) {
      peak = row[2];
      at = i + 1;
    }
    peak_limit = std::max(peak_limit, row[5]);
    peak_random = std::max(peak_random, row[8]);
  }
  std::cout << "target logs " << covert_curves_targets(curves.get()) << "; F peak " << format_number(peak)
            << " at D_r=" << at << " (limit " << format_number(peak_limit) << ", random "
            << format_number(peak_random) << ")\n";
  return 0;
}

int run_experiment(const Common& common) {
  auto cfg = load_config(common);
  if (common.seed) check(covert_config_set(cfg.get(), "seeds", std::to_string(*common.seed).c_str()));
  check(covert_config_validate(cfg.get()));
  covert_experiment* raw = nullptr;
  check(covert_experiment_run(cfg.get(), &raw));
  ExperimentPtr e(raw);
  check(covert_experiment_write(e.get(), common.out_dir.c_str()));
  std::cout << fetch([&](char* b, std::size_t c, std::size_t* n) {
    return covert_experiment_describe(e.get(), b, c, n);
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert node discovery: synthesize networks, generate surveillance logs, rank and evaluate."};
  app.require_subcommand(1);
  app.set_version_flag("--version", covert_version());

  const char* network_keys[][2] = {
      {"edges", "edge list to load instead of synthesizing"},
      {"cluster-file", "cluster assignment for the loaded edge list"},
      {"nodes", "number of nodes to synthesize"},
      {"clusters", "number of clusters to synthesize"},
      {"eta", "contrast: same-cluster attachment weight factor"},
      {"min-links", "fewest links a new node makes"},
      {"max-links", "most links a new node makes"},
      {"initial-edges", "inter-cluster edges among the seed nodes"},
  };
  const char* fit_keys[][2] = {
      {"optimizer", "search direction: natural (default) or plain gradient"},
      {"learning-rate", "largest step"},
      {"max-iters", "iteration cap"},
      {"tol", "stop when the log-likelihood gain falls below this"},
      {"eps", "parameter floor"},
  };

  Common synth_opts, logs_opts, rank_opts, eval_opts, exp_opts;
  RankArgs rank_args;
  EvaluateArgs eval_args;

  auto* synth = app.add_subcommand("synthesize", "generate a clustered scale-free network");
  add_common(synth, synth_opts);
  for (const auto& k : network_keys) add_key_flag(synth, synth_opts, k[0], k[1]);
  synth->add_option("--seed", synth_opts.seed, "random seed (default: first configured seed)");

  auto* gen = app.add_subcommand("gen-logs", "draw activity patterns and hide the covert nodes");
  add_common(gen, logs_opts);
  for (const auto& k : network_keys) add_key_flag(gen, logs_opts, k[0], k[1]);
  gen->add_option_function<std::string>(
      "--graph", [&](const std::string& v) { logs_opts.flags.emplace_back("edges", v); },
      "edge list to use (same as --edges)");
  add_key_flag(gen, logs_opts, "covert", "hub, peripheral or a comma-separated label list");
  add_key_flag(gen, logs_opts, "logs", "number of surveillance logs D");
  gen->add_option("--seed", logs_opts.seed, "random seed (default: first configured seed)");

  auto* rank = app.add_subcommand("rank", "rank surveillance logs by suspiciousness");
  add_common(rank, rank_opts);
  rank->add_option("--input", rank_args.input, "log file (default: <out>/logs.txt)");
  rank->add_option("--method", rank_args.method, "mle, heuristic or heuristic:C")->capture_default_str();
  rank->add_option_function<std::string>(
      "--clusters", [&](const std::string& v) { rank_opts.flags.emplace_back("heuristic-clusters", v); },
      "k-medoids cluster count for the heuristic");
  for (const auto& k : fit_keys) add_key_flag(rank, rank_opts, k[0], k[1]);
  rank->add_option("--seed", rank_opts.seed, "seed for k-medoids initialisation (default: first configured seed)");

  auto* eval = app.add_subcommand("evaluate", "precision/recall/F curves of a ranking");
  add_common(eval, eval_opts);
  eval->add_option("--input", eval_args.input, "log file (default: <out>/logs.txt)");
  eval->add_option("--truth", eval_args.truth, "activity pattern file (default: <out>/patterns.txt)");
  eval->add_option("--ranking", eval_args.ranking, "ranking CSV (default: <out>/ranking-<method>.csv)");
  eval->add_option("--method", eval_args.method, "method name used for file names")->capture_default_str();

  auto* exp = app.add_subcommand("experiment", "end-to-end run over many seeds");
  add_common(exp, exp_opts);
  for (const auto& k : network_keys) add_key_flag(exp, exp_opts, k[0], k[1]);
  for (const auto& k : fit_keys) add_key_flag(exp, exp_opts, k[0], k[1]);
  add_key_flag(exp, exp_opts, "covert", "hub, peripheral or a comma-separated label list");
  add_key_flag(exp, exp_opts, "logs", "number of surveillance logs D per seed");
  add_key_flag(exp, exp_opts, "methods", "comma-separated: mle, heuristic, heuristic:C");
  add_key_flag(exp, exp_opts, "heuristic-clusters", "default k-medoids cluster count");
  add_key_flag(exp, exp_opts, "seeds", "seed list, e.g. 1-20 or 3,5,8");
  add_key_flag(exp, exp_opts, "threads", "worker threads");
  exp->add_option("--seed", exp_opts.seed, "run a single seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return run_synthesize(synth_opts);
    if (gen->parsed()) return run_gen_logs(logs_opts);
    if (rank->parsed()) return run_rank(rank_opts, rank_args);
    if (eval->parsed()) return run_evaluate(eval_opts, eval_args);
    if (exp->parsed()) return run_experiment(exp_opts);
  } catch (const std::exception& e) {
    std::cerr << "covert: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
