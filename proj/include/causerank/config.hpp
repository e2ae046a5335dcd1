#pragma once
// Run configuration: one JSON document drives every command. The same schema
// is read from the --config file and patched by CLI flags. Round-trips
// through to_json/from_json without loss.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "causerank/match.hpp"
#include "causerank/rerank.hpp"
#include "causerank/vector_store.hpp"

namespace crk {

struct VectorsConfig {
  std::string arguments;        // path to the argument/word vector file
  std::string predicates;      // optional separate predicate vector file
  size_t dim = 100;
  OovPolicy oov_policy = OovPolicy::skip;
};

struct WeightsConfig {
  std::string path;                  // binary weight container
  std::optional<uint64_t> seed;      // or deterministic synthetic weights
};

struct ExtractorConfig {
  std::string kind = "preannotated";  // "preannotated" | "rulebased"
  std::string lexicon;
  std::string role_markers;
};

struct MetricsConfig {
  double pmi_smoothing = 1.0;
  int bleu_max_n = 4;
  int nist_max_n = 5;
};

struct RunConfig {
  std::string pool;
  bool pool_strict = false;
  VectorsConfig vectors;
  WeightsConfig weights;
  std::string index_cache;
  std::string input;
  std::string output;
  RerankConfig rerank;
  ExtractorConfig extractor;
  MetricsConfig metrics;
  int parallelism = 1;
  std::string report = "text";  // "text" | "json"
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

// Which inputs a command needs; validation checks them before any work.
enum class Command { build_index, rerank, evaluate, inspect_match };

// Throws Error(invalid/io) when a required field is missing or a referenced
// file does not exist.
void validate_config(const RunConfig& config, Command command);

}  // namespace crk
