// extern-C surface of the shared library. Thin translation layer: exceptions
// from the core become status codes plus a thread-local message.

#include "causerank.h"

#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"

#include "causerank/config.hpp"
#include "causerank/error.hpp"
#include "causerank/match.hpp"
#include "causerank/pipeline.hpp"
#include "causerank/pool.hpp"
#include "causerank/rftm.hpp"
#include "causerank/serde.hpp"
#include "causerank/vector_store.hpp"

namespace {

static_assert(static_cast<int>(crk::ErrorCode::io) == CRK_ERR_IO);
static_assert(static_cast<int>(crk::ErrorCode::parse) == CRK_ERR_PARSE);
static_assert(static_cast<int>(crk::ErrorCode::invalid) == CRK_ERR_INVALID);
static_assert(static_cast<int>(crk::ErrorCode::dimension) == CRK_ERR_DIMENSION);
static_assert(static_cast<int>(crk::ErrorCode::oov) == CRK_ERR_OOV);
static_assert(static_cast<int>(crk::ErrorCode::state) == CRK_ERR_STATE);
static_assert(static_cast<int>(crk::ErrorCode::item) == CRK_ERR_ITEM);
static_assert(static_cast<int>(crk::ErrorCode::internal) == CRK_ERR_INTERNAL);

thread_local std::string g_last_error;

template <typename Fn>
crk_status guarded(Fn&& fn) {
  try {
    fn();
    return CRK_OK;
  } catch (const crk::Error& e) {
    g_last_error = e.what();
    return static_cast<crk_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CRK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CRK_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

crk::MatchConfig match_config_from_json_text(const char* text) {
  crk::MatchConfig cfg;
  if (text == nullptr || *text == '\0') return cfg;
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("similarity_threshold")) cfg.similarity_threshold = j["similarity_threshold"];
  if (j.contains("default_lift")) cfg.default_lift = j["default_lift"];
  if (j.contains("allow_inverse")) cfg.allow_inverse = j["allow_inverse"];
  if (j.contains("min_effective_lift")) cfg.min_effective_lift = j["min_effective_lift"];
  if (j.contains("objective")) {
    std::string o = j["objective"];
    if (o == "lift_emb") {
      cfg.objective = crk::MatchObjective::lift_emb;
    } else if (o == "mean_sim") {
      cfg.objective = crk::MatchObjective::mean_sim;
    } else {
      crk::fail(crk::ErrorCode::invalid, "objective must be 'lift_emb' or 'mean_sim'");
    }
  }
  if (j.contains("search")) {
    std::string s = j["search"];
    if (s == "pruned") {
      cfg.search = crk::SearchPath::pruned;
    } else if (s == "brute") {
      cfg.search = crk::SearchPath::brute;
    } else {
      crk::fail(crk::ErrorCode::invalid, "search must be 'pruned' or 'brute'");
    }
  }
  cfg.validate();
  return cfg;
}

void require_arg(const void* p, const char* name) {
  if (p == nullptr) crk::fail(crk::ErrorCode::invalid, std::string(name) + " is null");
}

}  // namespace

struct crk_pool {
  std::shared_ptr<crk::CausalityPool> pool;
};

struct crk_vectors {
  std::shared_ptr<crk::VectorStore> store;
};

struct crk_weights {
  std::shared_ptr<crk::RftmWeights> weights;
};

struct crk_embedder {
  std::shared_ptr<crk::RftmEmbedder> embedder;
};

struct crk_index {
  std::shared_ptr<crk::CausalityIndex> index;
  std::shared_ptr<crk::RftmEmbedder> embedder;  // kept for embedded matching
};

extern "C" {

const char* crk_status_name(crk_status status) {
  switch (status) {
    case CRK_OK: return "ok";
    case CRK_ERR_IO: return "io";
    case CRK_ERR_PARSE: return "parse";
    case CRK_ERR_INVALID: return "invalid";
    case CRK_ERR_DIMENSION: return "dimension";
    case CRK_ERR_OOV: return "oov";
    case CRK_ERR_STATE: return "state";
    case CRK_ERR_ITEM: return "item";
    case CRK_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* crk_last_error(void) { return g_last_error.c_str(); }

const char* crk_version(void) { return "0.1.0"; }

void crk_string_free(char* s) { delete[] s; }

/* ---- pool ---- */

crk_status crk_pool_load(const char* path, int strict, crk_pool** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    auto pool = std::make_shared<crk::CausalityPool>(crk::load_causality_pairs(
        path, strict ? crk::Strictness::strict : crk::Strictness::lenient));
    *out = new crk_pool{std::move(pool)};
  });
}

crk_status crk_pool_save(const crk_pool* pool, const char* path) {
  return guarded([&] {
    require_arg(pool, "pool");
    require_arg(path, "path");
    crk::save_causality_pairs(*pool->pool, path);
  });
}

size_t crk_pool_size(const crk_pool* pool) {
  return pool == nullptr ? 0 : pool->pool->entries.size();
}

size_t crk_pool_collapsed(const crk_pool* pool) {
  return pool == nullptr ? 0 : pool->pool->meta.collapsed;
}

size_t crk_pool_skipped(const crk_pool* pool) {
  return pool == nullptr ? 0 : pool->pool->meta.skipped_lines;
}

void crk_pool_free(crk_pool* pool) { delete pool; }

/* ---- vectors ---- */

crk_status crk_vectors_load(const char* path, size_t expected_dim, crk_vectors** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    auto store = std::make_shared<crk::VectorStore>(crk::load_vectors(path, expected_dim));
    *out = new crk_vectors{std::move(store)};
  });
}

size_t crk_vectors_dim(const crk_vectors* vectors) {
  return vectors == nullptr ? 0 : vectors->store->dim();
}

size_t crk_vectors_size(const crk_vectors* vectors) {
  return vectors == nullptr ? 0 : vectors->store->size();
}

void crk_vectors_free(crk_vectors* vectors) { delete vectors; }

/* ---- weights ---- */

crk_status crk_weights_random(size_t dim, uint64_t seed, crk_weights** out) {
  return guarded([&] {
    require_arg(out, "out");
    auto w = std::make_shared<crk::RftmWeights>(crk::init_random_weights(dim, seed));
    *out = new crk_weights{std::move(w)};
  });
}

crk_status crk_weights_load(const char* path, crk_weights** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    auto w = std::make_shared<crk::RftmWeights>(crk::load_weights(path));
    *out = new crk_weights{std::move(w)};
  });
}

crk_status crk_weights_save(const crk_weights* weights, const char* path) {
  return guarded([&] {
    require_arg(weights, "weights");
    require_arg(path, "path");
    crk::save_weights(*weights->weights, path);
  });
}

crk_status crk_weights_export_json(const crk_weights* weights, char** out_json) {
  return guarded([&] {
    require_arg(weights, "weights");
    require_arg(out_json, "out_json");
    *out_json = dup_string(crk::weights_to_json(*weights->weights));
  });
}

size_t crk_weights_dim(const crk_weights* weights) {
  return weights == nullptr ? 0 : weights->weights->dim;
}

void crk_weights_free(crk_weights* weights) { delete weights; }

/* ---- embedder ---- */

crk_status crk_embedder_new(const crk_weights* weights, const crk_vectors* predicates,
                            const crk_vectors* arguments, int oov_policy, crk_embedder** out) {
  return guarded([&] {
    require_arg(weights, "weights");
    require_arg(arguments, "arguments");
    require_arg(out, "out");
    if (oov_policy < 0 || oov_policy > 2) {
      crk::fail(crk::ErrorCode::invalid, "oov_policy must be 0 (error), 1 (zero) or 2 (skip)");
    }
    auto embedder = std::make_shared<crk::RftmEmbedder>(
        weights->weights, predicates ? predicates->store : nullptr, arguments->store,
        static_cast<crk::OovPolicy>(oov_policy));
    *out = new crk_embedder{std::move(embedder)};
  });
}

crk_status crk_embedder_embed_json(const crk_embedder* embedder, const char* event_json,
                                   double* out_values, size_t capacity) {
  return guarded([&] {
    require_arg(embedder, "embedder");
    require_arg(event_json, "event_json");
    require_arg(out_values, "out_values");
    crk::Event event = crk::event_from_json(nlohmann::json::parse(event_json));
    crk::EventEmbedding emb = embedder->embedder->embed(event);
    if (capacity < emb.values.size()) {
      crk::fail(crk::ErrorCode::dimension, "capacity " + std::to_string(capacity) +
                                               " < embedding dimension " +
                                               std::to_string(emb.values.size()));
    }
    std::memcpy(out_values, emb.values.data(), emb.values.size() * sizeof(double));
  });
}

void crk_embedder_free(crk_embedder* embedder) { delete embedder; }

/* ---- index ---- */

crk_status crk_index_build(const crk_pool* pool, const crk_embedder* embedder, int threads,
                           crk_index** out) {
  return guarded([&] {
    require_arg(pool, "pool");
    require_arg(embedder, "embedder");
    require_arg(out, "out");
    auto index = std::make_shared<crk::CausalityIndex>(
        crk::CausalityIndex::build(pool->pool, *embedder->embedder, threads));
    *out = new crk_index{std::move(index), embedder->embedder};
  });
}

crk_status crk_index_save(const crk_index* index, const char* path) {
  return guarded([&] {
    require_arg(index, "index");
    require_arg(path, "path");
    index->index->save(path);
  });
}

crk_status crk_index_open(const crk_pool* pool, const crk_embedder* embedder, const char* path,
                          crk_index** out) {
  return guarded([&] {
    require_arg(pool, "pool");
    require_arg(embedder, "embedder");
    require_arg(path, "path");
    require_arg(out, "out");
    auto index = std::make_shared<crk::CausalityIndex>(
        crk::CausalityIndex::open(pool->pool, *embedder->embedder, path));
    *out = new crk_index{std::move(index), embedder->embedder};
  });
}

size_t crk_index_entries(const crk_index* index) {
  return index == nullptr ? 0 : index->index->entry_count();
}

size_t crk_index_embedded(const crk_index* index) {
  return index == nullptr ? 0 : index->index->embedded_count();
}

size_t crk_index_embed_failures(const crk_index* index) {
  return index == nullptr ? 0 : index->index->embed_failures();
}

void crk_index_free(crk_index* index) { delete index; }

/* ---- matching ---- */

crk_status crk_match_exact(const crk_index* index, const char* history_event_json,
                           const char* response_event_json, const char* match_config_json,
                           char** out_json) {
  return guarded([&] {
    require_arg(index, "index");
    require_arg(history_event_json, "history_event_json");
    require_arg(response_event_json, "response_event_json");
    require_arg(out_json, "out_json");
    crk::MatchConfig cfg = match_config_from_json_text(match_config_json);
    crk::Event h = crk::event_from_json(nlohmann::json::parse(history_event_json));
    crk::Event r = crk::event_from_json(nlohmann::json::parse(response_event_json));
    crk::MatchResult result = crk::exact_lift(h, r, *index->index, cfg);
    *out_json = dup_string(crk::match_result_to_json(result, index->index.get()).dump());
  });
}

crk_status crk_match_embedded(const crk_index* index, const crk_embedder* embedder,
                              const char* history_event_json, const char* response_event_json,
                              const char* match_config_json, char** out_json) {
  return guarded([&] {
    require_arg(index, "index");
    require_arg(history_event_json, "history_event_json");
    require_arg(response_event_json, "response_event_json");
    require_arg(out_json, "out_json");
    const auto& emb = embedder ? embedder->embedder : index->embedder;
    crk::MatchConfig cfg = match_config_from_json_text(match_config_json);
    crk::Event h = crk::event_from_json(nlohmann::json::parse(history_event_json));
    crk::Event r = crk::event_from_json(nlohmann::json::parse(response_event_json));
    crk::MatchResult result = crk::lift_emb(h, r, *index->index, cfg, *emb);
    *out_json = dup_string(crk::match_result_to_json(result, index->index.get()).dump());
  });
}

/* ---- whole-run commands ---- */

crk_status crk_run_build_index(const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(config_json, "config_json");
    require_arg(out_report_json, "out_report_json");
    crk::RunConfig cfg = crk::config_from_json(nlohmann::json::parse(config_json));
    *out_report_json = dup_string(crk::run_build_index(cfg).dump());
  });
}

crk_status crk_run_rerank(const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(config_json, "config_json");
    require_arg(out_report_json, "out_report_json");
    crk::RunConfig cfg = crk::config_from_json(nlohmann::json::parse(config_json));
    *out_report_json = dup_string(crk::run_rerank(cfg).dump());
  });
}

crk_status crk_run_evaluate(const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(config_json, "config_json");
    require_arg(out_report_json, "out_report_json");
    crk::RunConfig cfg = crk::config_from_json(nlohmann::json::parse(config_json));
    *out_report_json = dup_string(crk::run_evaluate(cfg).dump());
  });
}

crk_status crk_run_inspect_match(const char* config_json, const char* history_event_json,
                                 const char* response_event_json, char** out_json) {
  return guarded([&] {
    require_arg(config_json, "config_json");
    require_arg(history_event_json, "history_event_json");
    require_arg(response_event_json, "response_event_json");
    require_arg(out_json, "out_json");
    crk::RunConfig cfg = crk::config_from_json(nlohmann::json::parse(config_json));
    *out_json = dup_string(
        crk::run_inspect_match(cfg, history_event_json, response_event_json).dump());
  });
}

crk_status crk_render_eval_text(const char* report_json, char** out_text) {
  return guarded([&] {
    require_arg(report_json, "report_json");
    require_arg(out_text, "out_text");
    *out_text = dup_string(crk::render_eval_text(nlohmann::json::parse(report_json)));
  });
}

}  // extern "C"
