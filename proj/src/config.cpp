#include "causerank/config.hpp"

#include <cmath>
#include <filesystem>

#include "causerank/error.hpp"

namespace crk {

using nlohmann::json;

namespace {

template <typename T>
void read_field(const json& j, const char* name, T& out) {
  if (auto it = j.find(name); it != j.end() && !it->is_null()) {
    out = it->get<T>();
  }
}

MatchObjective objective_from_string(const std::string& s) {
  if (s == "lift_emb") return MatchObjective::lift_emb;
  if (s == "mean_sim") return MatchObjective::mean_sim;
  fail(ErrorCode::invalid, "match.objective must be 'lift_emb' or 'mean_sim'");
}

SearchPath search_from_string(const std::string& s) {
  if (s == "pruned") return SearchPath::pruned;
  if (s == "brute") return SearchPath::brute;
  fail(ErrorCode::invalid, "match.search must be 'pruned' or 'brute'");
}

MatcherKind matcher_from_string(const std::string& s) {
  if (s == "exact") return MatcherKind::exact;
  if (s == "embedded") return MatcherKind::embedded;
  fail(ErrorCode::invalid, "rerank.matcher must be 'exact' or 'embedded'");
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid, "config must be a JSON object");
  RunConfig c;
  read_field(j, "pool", c.pool);
  read_field(j, "pool_strict", c.pool_strict);
  read_field(j, "index_cache", c.index_cache);
  read_field(j, "input", c.input);
  read_field(j, "output", c.output);
  read_field(j, "parallelism", c.parallelism);
  read_field(j, "report", c.report);

  if (auto it = j.find("vectors"); it != j.end() && !it->is_null()) {
    read_field(*it, "arguments", c.vectors.arguments);
    read_field(*it, "predicates", c.vectors.predicates);
    read_field(*it, "dim", c.vectors.dim);
    if (auto p = it->find("oov_policy"); p != it->end() && !p->is_null()) {
      c.vectors.oov_policy = oov_policy_from_string(p->get<std::string>());
    }
  }
  if (auto it = j.find("weights"); it != j.end() && !it->is_null()) {
    read_field(*it, "path", c.weights.path);
    if (auto s = it->find("seed"); s != it->end() && !s->is_null()) {
      c.weights.seed = s->get<uint64_t>();
    }
  }
  if (auto it = j.find("rerank"); it != j.end() && !it->is_null()) {
    read_field(*it, "lambda", c.rerank.lambda);
    read_field(*it, "history_window", c.rerank.history_window);
    read_field(*it, "extract_missing_events", c.rerank.extract_missing_events);
    if (auto m = it->find("matcher"); m != it->end() && !m->is_null()) {
      c.rerank.matcher = matcher_from_string(m->get<std::string>());
    }
  }
  if (auto it = j.find("match"); it != j.end() && !it->is_null()) {
    read_field(*it, "similarity_threshold", c.rerank.match.similarity_threshold);
    read_field(*it, "default_lift", c.rerank.match.default_lift);
    read_field(*it, "allow_inverse", c.rerank.match.allow_inverse);
    read_field(*it, "min_effective_lift", c.rerank.match.min_effective_lift);
    if (auto o = it->find("objective"); o != it->end() && !o->is_null()) {
      c.rerank.match.objective = objective_from_string(o->get<std::string>());
    }
    if (auto s = it->find("search"); s != it->end() && !s->is_null()) {
      c.rerank.match.search = search_from_string(s->get<std::string>());
    }
  }
  if (auto it = j.find("extractor"); it != j.end() && !it->is_null()) {
    read_field(*it, "kind", c.extractor.kind);
    read_field(*it, "lexicon", c.extractor.lexicon);
    read_field(*it, "role_markers", c.extractor.role_markers);
  }
  if (auto it = j.find("metrics"); it != j.end() && !it->is_null()) {
    read_field(*it, "pmi_smoothing", c.metrics.pmi_smoothing);
    read_field(*it, "bleu_max_n", c.metrics.bleu_max_n);
    read_field(*it, "nist_max_n", c.metrics.nist_max_n);
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["pool"] = c.pool;
  j["pool_strict"] = c.pool_strict;
  j["index_cache"] = c.index_cache;
  j["input"] = c.input;
  j["output"] = c.output;
  j["parallelism"] = c.parallelism;
  j["report"] = c.report;
  j["vectors"] = {{"arguments", c.vectors.arguments},
                  {"predicates", c.vectors.predicates},
                  {"dim", c.vectors.dim},
                  {"oov_policy", oov_policy_name(c.vectors.oov_policy)}};
  j["weights"] = {{"path", c.weights.path}};
  if (c.weights.seed) j["weights"]["seed"] = *c.weights.seed;
  j["rerank"] = {{"lambda", c.rerank.lambda},
                 {"history_window", c.rerank.history_window},
                 {"matcher", c.rerank.matcher == MatcherKind::exact ? "exact" : "embedded"},
                 {"extract_missing_events", c.rerank.extract_missing_events}};
  j["match"] = {
      {"similarity_threshold", c.rerank.match.similarity_threshold},
      {"default_lift", c.rerank.match.default_lift},
      {"allow_inverse", c.rerank.match.allow_inverse},
      {"min_effective_lift", c.rerank.match.min_effective_lift},
      {"objective", c.rerank.match.objective == MatchObjective::lift_emb ? "lift_emb" : "mean_sim"},
      {"search", c.rerank.match.search == SearchPath::pruned ? "pruned" : "brute"}};
  j["extractor"] = {{"kind", c.extractor.kind},
                    {"lexicon", c.extractor.lexicon},
                    {"role_markers", c.extractor.role_markers}};
  j["metrics"] = {{"pmi_smoothing", c.metrics.pmi_smoothing},
                  {"bleu_max_n", c.metrics.bleu_max_n},
                  {"nist_max_n", c.metrics.nist_max_n}};
  return j;
}

namespace {

void require_path(const std::string& path, const char* what) {
  if (path.empty()) {
    fail(ErrorCode::invalid, std::string("config: ") + what + " is required");
  }
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::io, std::string("config: ") + what + " does not exist: " + path);
  }
}

void validate_embedding_resources(const RunConfig& c) {
  require_path(c.vectors.arguments, "vectors.arguments");
  if (!c.vectors.predicates.empty()) require_path(c.vectors.predicates, "vectors.predicates");
  if (c.vectors.dim == 0) fail(ErrorCode::invalid, "config: vectors.dim must be positive");
  if (c.weights.path.empty() && !c.weights.seed) {
    fail(ErrorCode::invalid, "config: weights.path or weights.seed is required");
  }
  if (!c.weights.path.empty() && c.weights.seed) {
    fail(ErrorCode::invalid, "config: weights.path and weights.seed are mutually exclusive");
  }
  if (!c.weights.path.empty()) require_path(c.weights.path, "weights.path");
}

void validate_extractor(const RunConfig& c) {
  if (c.extractor.kind == "preannotated") return;
  if (c.extractor.kind != "rulebased") {
    fail(ErrorCode::invalid, "config: extractor.kind must be 'preannotated' or 'rulebased'");
  }
  require_path(c.extractor.lexicon, "extractor.lexicon");
  if (!c.extractor.role_markers.empty()) {
    require_path(c.extractor.role_markers, "extractor.role_markers");
  }
}

}  // namespace

void validate_config(const RunConfig& c, Command command) {
  if (c.parallelism < 1) fail(ErrorCode::invalid, "config: parallelism must be >= 1");
  if (c.report != "text" && c.report != "json") {
    fail(ErrorCode::invalid, "config: report must be 'text' or 'json'");
  }
  c.rerank.validate();
  if (!(c.metrics.pmi_smoothing > 0.0) || !std::isfinite(c.metrics.pmi_smoothing)) {
    fail(ErrorCode::invalid, "config: metrics.pmi_smoothing must be > 0");
  }
  if (c.metrics.bleu_max_n < 1 || c.metrics.nist_max_n < 1) {
    fail(ErrorCode::invalid, "config: metric n-gram orders must be >= 1");
  }

  switch (command) {
    case Command::build_index:
      require_path(c.pool, "pool");
      validate_embedding_resources(c);
      if (c.index_cache.empty()) {
        fail(ErrorCode::invalid, "config: index_cache is required for build-index");
      }
      break;
    case Command::rerank:
      require_path(c.pool, "pool");
      validate_embedding_resources(c);
      require_path(c.input, "input");
      if (c.output.empty()) fail(ErrorCode::invalid, "config: output is required for rerank");
      validate_extractor(c);
      break;
    case Command::evaluate:
      require_path(c.input, "input");
      // extrema needs word vectors; weights and pool are not used here
      require_path(c.vectors.arguments, "vectors.arguments");
      if (c.vectors.dim == 0) fail(ErrorCode::invalid, "config: vectors.dim must be positive");
      break;
    case Command::inspect_match:
      require_path(c.pool, "pool");
      validate_embedding_resources(c);
      break;
  }
}

}  // namespace crk
