#pragma once
// JSON wire formats. Rerank input is JSON-lines, one item per line:
//   {"id": "...",
//    "history": [{"text": "...", "events": [EVENT...]}, ...],
//    "candidates": [{"text": "...", "log_prob": -1.2, "events": [EVENT...]}, ...]}
// EVENT = {"predicate": "...", "arguments": [{"role": "accusative", "lemma": "..."}]}
// The "events" fields may be omitted when an extractor is configured.
//
// Evaluation input is JSON-lines too:
//   {"history": [TOKENS...], "reference": TOKENS, "before": TOKENS,
//    "after": TOKENS, "nbest": [TOKENS...]}   (nbest optional)
// TOKENS is either an array of token strings or a string split on whitespace.
//
// Every output line carries a "schema" field.

#include <optional>
#include <string>

#include "json.hpp"

#include "causerank/extract.hpp"
#include "causerank/match.hpp"
#include "causerank/metrics.hpp"
#include "causerank/rerank.hpp"

namespace crk {

inline constexpr const char* kRerankSchema = "causerank.rerank.v1";
inline constexpr const char* kErrorSchema = "causerank.error.v1";
inline constexpr const char* kEvalSchema = "causerank.eval.v1";
inline constexpr const char* kIndexSchema = "causerank.index.v1";

nlohmann::json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);

// When events are absent and an extractor is given, events come from the
// extractor (preannotated mode then fails: the input promised events).
RerankItem item_from_json(const nlohmann::json& j, const ExtractorSpec* extractor);

nlohmann::json match_result_to_json(const MatchResult& result, const CausalityIndex* index);

// One output line for a processed item (ordered candidates with scores, the
// reranked flag, and the explanation record for the chosen candidate).
nlohmann::json rerank_result_to_json(const RerankResult& result, const RerankItem& item,
                                     const CausalityIndex* index);

struct EvalPair {
  std::vector<Tokens> history;
  Tokens reference;
  Tokens before;
  Tokens after;
  std::vector<Tokens> nbest;  // may be empty
};

EvalPair eval_pair_from_json(const nlohmann::json& j);

}  // namespace crk
