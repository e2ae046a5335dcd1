#pragma once
// Command implementations behind the C API: resource loading with index-cache
// reuse, item-parallel reranking with input-ordered output, and the
// evaluation report.

#include <functional>
#include <memory>
#include <string>

#include "json.hpp"

#include "causerank/config.hpp"
#include "causerank/extract.hpp"
#include "causerank/match.hpp"

namespace crk {

struct Resources {
  std::shared_ptr<const CausalityPool> pool;
  std::shared_ptr<const VectorStore> argument_store;
  std::shared_ptr<const VectorStore> predicate_store;  // null -> argument store
  std::shared_ptr<const RftmWeights> weights;
  std::shared_ptr<const RftmEmbedder> embedder;
  std::shared_ptr<const CausalityIndex> index;
  ExtractorSpec extractor;
};

// Loads what the command needs. When want_index is set, a valid cache at
// config.index_cache is opened; otherwise the index is built (and written to
// the cache path when one is configured and write_cache is set).
Resources load_resources(const RunConfig& config, bool want_index, bool write_cache);

// Returns {"schema": "causerank.index.v1", entries, embedded, failures, ...}.
nlohmann::json run_build_index(const RunConfig& config);

// Processes config.input JSONL to config.output JSONL and returns a summary
// {"items", "failed", "reranked", "reranked_ratio", ...}. Per-item failures
// become error lines in the output; any failure is reported in the summary.
nlohmann::json run_rerank(const RunConfig& config);

// Full metric report over an evaluation JSONL (before/after systems plus
// reference statistics). Written to config.output when set.
nlohmann::json run_evaluate(const RunConfig& config);

// MatchResult for two event JSON documents under the configured matcher.
nlohmann::json run_inspect_match(const RunConfig& config, const std::string& history_event_json,
                                 const std::string& response_event_json);

// Aligned-column rendering of an evaluation report (the text report form).
std::string render_eval_text(const nlohmann::json& report);

// Applies fn to 0..count-1 with the given parallelism; results are collected
// by index so output order never depends on scheduling.
std::vector<std::string> parallel_map_ordered(size_t count, int parallelism,
                                              const std::function<std::string(size_t)>& fn);

}  // namespace crk
