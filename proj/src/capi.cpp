// Licensed under the Apache License 2.0 (see LICENSE file).

#include "covert/covert.h"

#include "covert/error.hpp"
#include "covert/evaluation.hpp"
#include "covert/experiment.hpp"
#include "covert/graph.hpp"
#include "covert/mle.hpp"
#include "covert/ranking.hpp"
#include "covert/text.hpp"
#include "covert/transmission.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

struct covert_config {
  covert::ExperimentConfig value;
};
struct covert_graph {
  covert::Graph value;
};
struct covert_dataset {
  covert::LogDataset value;
};
struct covert_fit {
  covert::FitResult value;
};
struct covert_ranking {
  covert::RankingResult value;
};
struct covert_curves {
  covert::EvalCurves value;
};
struct covert_experiment {
  covert::ExperimentConfig config;
  covert::ExperimentResult value;
};

namespace {

thread_local std::string last_error;

covert_status fail(covert_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating the library's exception types into status codes.
template <class Body>
covert_status guarded(Body&& body) noexcept {
  try {
    body();
    return COVERT_OK;
  } catch (const covert::ParseError& e) {
    return fail(COVERT_ERR_PARSE, e.what());
  } catch (const covert::IoError& e) {
    return fail(COVERT_ERR_IO, e.what());
  } catch (const covert::StateError& e) {
    return fail(COVERT_ERR_STATE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(COVERT_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::domain_error& e) {
    return fail(COVERT_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(COVERT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(COVERT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COVERT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(COVERT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " is null");
}

void copy_out(const std::string& s, char* buf, std::size_t capacity, std::size_t* required) {
  if (required) *required = s.size() + 1;
  if (buf == nullptr || capacity == 0) return;
  const std::size_t n = std::min(capacity - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

std::optional<std::filesystem::path> optional_path(const char* p) {
  if (p == nullptr || *p == '\0') return std::nullopt;
  return std::filesystem::path(p);
}

std::string join_labels(const covert::Graph& g, std::span<const covert::NodeIndex> nodes) {
  std::string out;
  for (const auto v : nodes) {
    if (!out.empty()) out += ',';
    out += g.label(v);
  }
  return out;
}

}  // namespace

extern "C" {

const char* covert_last_error(void) { return last_error.c_str(); }

const char* covert_status_name(covert_status status) {
  switch (status) {
    case COVERT_OK: return "ok";
    case COVERT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case COVERT_ERR_OUT_OF_RANGE: return "out of range";
    case COVERT_ERR_IO: return "i/o error";
    case COVERT_ERR_PARSE: return "parse error";
    case COVERT_ERR_NUMERIC: return "numeric error";
    case COVERT_ERR_STATE: return "invalid state";
    case COVERT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* covert_version(void) { return "1.0.0"; }

// ---- configuration ----

covert_status covert_config_new(covert_config** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new covert_config{};
  });
}

void covert_config_free(covert_config* cfg) { delete cfg; }

covert_status covert_config_load(covert_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    cfg->value = covert::read_experiment_config(path);
  });
}

covert_status covert_config_set(covert_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    covert::set_option(cfg->value, key, value);
  });
}

covert_status covert_config_get(const covert_config* cfg, const char* key, char* buf, size_t capacity,
                                size_t* required) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    const std::string all = covert::format_experiment_config(cfg->value);
    const std::string_view wanted = covert::text::trim(key);
    std::size_t pos = 0;
    while (pos < all.size()) {
      const std::size_t end = all.find('\n', pos);
      const std::string_view line(all.data() + pos, end - pos);
      const std::size_t eq = line.find('=');
      if (covert::text::trim(line.substr(0, eq)) == wanted) {
        copy_out(std::string(covert::text::trim(line.substr(eq + 1))), buf, capacity, required);
        return;
      }
      pos = end + 1;
    }
    throw std::invalid_argument("unknown configuration key '" + std::string(wanted) + "'");
  });
}

covert_status covert_config_format(const covert_config* cfg, char* buf, size_t capacity, size_t* required) {
  return guarded([&] {
    require(cfg, "config");
    copy_out(covert::format_experiment_config(cfg->value), buf, capacity, required);
  });
}

covert_status covert_config_validate(const covert_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    covert::validate(cfg->value);
  });
}

size_t covert_config_seed_count(const covert_config* cfg) { return cfg ? cfg->value.seeds.size() : 0; }

covert_status covert_config_seed(const covert_config* cfg, size_t index, uint64_t* out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "output pointer");
    *out = cfg->value.seeds.at(index);
  });
}

// ---- graphs ----

covert_status covert_graph_build(const covert_config* cfg, uint64_t seed, covert_graph** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "output pointer");
    *out = new covert_graph{covert::build_graph(cfg->value, seed)};
  });
}

covert_status covert_graph_load(const char* edges_path, const char* clusters_path, covert_graph** out) {
  return guarded([&] {
    require(edges_path, "edge list path");
    require(out, "output pointer");
    *out = new covert_graph{covert::read_edge_list(edges_path, optional_path(clusters_path))};
  });
}

covert_status covert_graph_save(const covert_graph* g, const char* edges_path, const char* clusters_path) {
  return guarded([&] {
    require(g, "graph");
    require(edges_path, "edge list path");
    covert::write_edge_list(g->value, edges_path, optional_path(clusters_path));
  });
}

void covert_graph_free(covert_graph* g) { delete g; }

size_t covert_graph_node_count(const covert_graph* g) { return g ? g->value.node_count() : 0; }

size_t covert_graph_edge_count(const covert_graph* g) { return g ? g->value.edge_count() : 0; }

covert_status covert_graph_degree(const covert_graph* g, size_t node, size_t* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "output pointer");
    *out = covert::degree(g->value, node);
  });
}

covert_status covert_graph_label(const covert_graph* g, size_t node, char* buf, size_t capacity, size_t* required) {
  return guarded([&] {
    require(g, "graph");
    copy_out(g->value.label(node), buf, capacity, required);
  });
}

covert_status covert_graph_stats(const covert_graph* g, double* avg_degree, double* avg_clustering, double* gini) {
  return guarded([&] {
    require(g, "graph");
    const auto s = covert::graph_stats(g->value);
    if (avg_degree) *avg_degree = s.avg_degree;
    if (avg_clustering) *avg_clustering = s.avg_clustering;
    if (gini) *gini = s.gini;
  });
}

covert_status covert_graph_covert_labels(const covert_graph* g, const covert_config* cfg, char* buf,
                                         size_t capacity, size_t* required) {
  return guarded([&] {
    require(g, "graph");
    require(cfg, "config");
    copy_out(join_labels(g->value, covert::select_covert(g->value, cfg->value.covert)), buf, capacity, required);
  });
}

// ---- surveillance logs ----

covert_status covert_dataset_generate(const covert_graph* g, const covert_config* cfg, uint64_t seed,
                                      covert_dataset** out) {
  return guarded([&] {
    require(g, "graph");
    require(cfg, "config");
    require(out, "output pointer");
    if (cfg->value.log_count == 0) throw std::invalid_argument("logs must be at least 1");
    const auto covert_nodes = covert::select_covert(g->value, cfg->value.covert);
    *out = new covert_dataset{covert::generate_dataset(cfg->value, g->value, covert_nodes, seed)};
  });
}

covert_status covert_dataset_load(const char* logs_path, const char* truth_path, covert_dataset** out) {
  return guarded([&] {
    require(logs_path, "log file path");
    require(out, "output pointer");
    *out = new covert_dataset{covert::read_dataset(logs_path, optional_path(truth_path))};
  });
}

covert_status covert_dataset_save(const covert_dataset* ds, const char* logs_path, const char* truth_path) {
  return guarded([&] {
    require(ds, "dataset");
    require(logs_path, "log file path");
    covert::write_dataset(ds->value, logs_path, optional_path(truth_path));
  });
}

void covert_dataset_free(covert_dataset* ds) { delete ds; }

size_t covert_dataset_log_count(const covert_dataset* ds) { return ds ? ds->value.log_count() : 0; }

size_t covert_dataset_node_count(const covert_dataset* ds) { return ds ? ds->value.node_count() : 0; }

covert_status covert_dataset_target_count(const covert_dataset* ds, size_t* out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "output pointer");
    *out = covert::count_targets(ds->value);
  });
}

// ---- ranking ----

covert_status covert_rank(const covert_dataset* ds, const covert_config* cfg, const char* method, uint64_t seed,
                          covert_ranking** out, covert_fit** fit_out) {
  return guarded([&] {
    require(ds, "dataset");
    require(cfg, "config");
    require(method, "method");
    require(out, "output pointer");
    const auto spec = covert::parse_method(method);
    covert::FitResult fr;
    auto ranking = covert::rank_logs(cfg->value, spec, ds->value, seed, &fr);
    auto* r = new covert_ranking{std::move(ranking)};
    if (fit_out) {
      if (spec.kind == covert::MethodSpec::Kind::kMle) {
        try {
          *fit_out = new covert_fit{std::move(fr)};
        } catch (...) {
          delete r;
          throw;
        }
      } else {
        *fit_out = nullptr;
      }
    }
    *out = r;
  });
}

covert_status covert_ranking_load(const char* path, covert_ranking** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new covert_ranking{covert::read_ranking(path)};
  });
}

covert_status covert_ranking_save(const covert_ranking* r, const char* path) {
  return guarded([&] {
    require(r, "ranking");
    require(path, "path");
    covert::write_ranking(r->value, path);
  });
}

void covert_ranking_free(covert_ranking* r) { delete r; }

size_t covert_ranking_size(const covert_ranking* r) { return r ? r->value.order.size() : 0; }

covert_status covert_ranking_entry(const covert_ranking* r, size_t position, size_t* log_index, double* score) {
  return guarded([&] {
    require(r, "ranking");
    const std::size_t i = r->value.order.at(position);
    if (log_index) *log_index = i;
    if (score) *score = r->value.scores.at(i);
  });
}

void covert_fit_free(covert_fit* fit) { delete fit; }

covert_status covert_fit_summary(const covert_fit* fit, size_t* iterations, int* converged,
                                 double* initial_log_likelihood, double* final_log_likelihood) {
  return guarded([&] {
    require(fit, "fit");
    const auto& f = fit->value;
    if (iterations) *iterations = f.iterations;
    if (converged) *converged = f.converged ? 1 : 0;
    if (initial_log_likelihood) *initial_log_likelihood = f.log_likelihood_trace.front();
    if (final_log_likelihood) *final_log_likelihood = f.log_likelihood_trace.back();
  });
}

covert_status covert_fit_save(const covert_fit* fit, const covert_dataset* ds, const char* initiation_path,
                              const char* transmission_path) {
  return guarded([&] {
    require(fit, "fit");
    require(ds, "dataset");
    require(initiation_path, "initiation path");
    require(transmission_path, "transmission path");
    if (fit->value.theta.size() != ds->value.node_count())
      throw std::invalid_argument("fit and dataset have different node counts");
    covert::write_fit(fit->value, ds->value, initiation_path, transmission_path);
  });
}

// ---- evaluation ----

covert_status covert_evaluate(const covert_ranking* r, const covert_dataset* ds, covert_curves** out) {
  return guarded([&] {
    require(r, "ranking");
    require(ds, "dataset");
    require(out, "output pointer");
    *out = new covert_curves{covert::evaluate(r->value, ds->value)};
  });
}

covert_status covert_curves_save(const covert_curves* c, const char* path) {
  return guarded([&] {
    require(c, "curves");
    require(path, "path");
    covert::write_curves(c->value, path);
  });
}

void covert_curves_free(covert_curves* c) { delete c; }

size_t covert_curves_length(const covert_curves* c) { return c ? c->value.ranked.size() : 0; }

size_t covert_curves_targets(const covert_curves* c) { return c ? c->value.targets : 0; }

covert_status covert_curves_row(const covert_curves* c, size_t index, double values[9]) {
  return guarded([&] {
    require(c, "curves");
    require(values, "values");
    const covert::RetrievalCurve* parts[] = {&c->value.ranked, &c->value.limit, &c->value.random};
    for (int k = 0; k < 3; ++k) {
      values[3 * k] = parts[k]->precision.at(index);
      values[3 * k + 1] = parts[k]->recall.at(index);
      values[3 * k + 2] = parts[k]->f_measure.at(index);
    }
  });
}

// ---- experiments ----

covert_status covert_experiment_run(const covert_config* cfg, covert_experiment** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "output pointer");
    auto result = covert::run_experiment(cfg->value);
    *out = new covert_experiment{cfg->value, std::move(result)};
  });
}

covert_status covert_experiment_write(const covert_experiment* e, const char* out_dir) {
  return guarded([&] {
    require(e, "experiment");
    require(out_dir, "output directory");
    covert::write_experiment(e->config, e->value, out_dir);
  });
}

covert_status covert_experiment_describe(const covert_experiment* e, char* buf, size_t capacity, size_t* required) {
  return guarded([&] {
    require(e, "experiment");
    copy_out(covert::describe(e->value), buf, capacity, required);
  });
}

void covert_experiment_free(covert_experiment* e) { delete e; }

}  // extern "C"
