#include "causerank/serde.hpp"

#include <cmath>

#include "causerank/error.hpp"
#include "causerank/text.hpp"

namespace crk {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    fail(ErrorCode::parse, std::string("missing field '") + field + "'");
  }
  return *it;
}

std::string require_string(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) fail(ErrorCode::parse, std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

Tokens tokens_from_json(const json& j, const char* field) {
  if (j.is_string()) return split_ws(j.get<std::string>());
  if (j.is_array()) {
    Tokens out;
    out.reserve(j.size());
    for (const json& t : j) {
      if (!t.is_string()) {
        fail(ErrorCode::parse, std::string("field '") + field + "' must hold token strings");
      }
      out.push_back(t.get<std::string>());
    }
    return out;
  }
  fail(ErrorCode::parse,
       std::string("field '") + field + "' must be a string or an array of tokens");
}

}  // namespace

json event_to_json(const Event& event) {
  json args = json::array();
  for (const Argument& a : event.arguments) {
    args.push_back({{"role", role_name(a.role)}, {"lemma", a.lemma}});
  }
  return json{{"predicate", event.predicate}, {"arguments", std::move(args)}};
}

Event event_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::parse, "event must be a JSON object");
  std::string predicate = require_string(j, "predicate");
  std::vector<std::pair<Role, std::string>> args;
  if (auto it = j.find("arguments"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::parse, "event 'arguments' must be an array");
    for (const json& a : *it) {
      args.emplace_back(role_from_string(require_string(a, "role")),
                        require_string(a, "lemma"));
    }
  }
  return make_event(predicate, std::move(args));
}

namespace {

std::vector<Event> events_field(const json& j, const ExtractorSpec* extractor,
                                const std::string& text, const char* owner) {
  auto it = j.find("events");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::parse, std::string(owner) + " 'events' must be an array");
    std::vector<Event> events;
    events.reserve(it->size());
    for (const json& e : *it) events.push_back(event_from_json(e));
    return events;
  }
  if (extractor == nullptr || extractor->kind == ExtractorKind::preannotated) {
    fail(ErrorCode::parse,
         std::string(owner) + " lacks 'events' and no rule-based extractor is configured");
  }
  return extract_rule_based(text, *extractor);
}

}  // namespace

RerankItem item_from_json(const json& j, const ExtractorSpec* extractor) {
  if (!j.is_object()) fail(ErrorCode::parse, "item must be a JSON object");
  RerankItem item;
  item.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : "";

  if (auto it = j.find("history"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::parse, "item 'history' must be an array");
    for (const json& u : *it) {
      Utterance utt;
      utt.text = u.contains("text") ? require_string(u, "text") : "";
      utt.events = events_field(u, extractor, utt.text, "history utterance");
      item.history.push_back(std::move(utt));
    }
  }

  const json& candidates = require(j, "candidates");
  if (!candidates.is_array() || candidates.empty()) {
    fail(ErrorCode::parse, "item 'candidates' must be a non-empty array");
  }
  int rank = 0;
  for (const json& c : candidates) {
    Candidate cand;
    cand.text = c.contains("text") ? require_string(c, "text") : "";
    const json& lp = require(c, "log_prob");
    if (!lp.is_number()) fail(ErrorCode::parse, "candidate 'log_prob' must be a number");
    cand.log_prob = lp.get<double>();
    if (!(cand.log_prob <= 0.0) || !std::isfinite(cand.log_prob)) {
      fail(ErrorCode::invalid, "candidate log_prob must be finite and <= 0");
    }
    cand.events = events_field(c, extractor, cand.text, "candidate");
    cand.original_rank = c.contains("original_rank") ? c["original_rank"].get<int>() : rank;
    item.candidates.push_back(std::move(cand));
    ++rank;
  }
  return item;
}

json match_result_to_json(const MatchResult& result, const CausalityIndex* index) {
  json j;
  j["effective_lift"] = result.effective_lift;
  j["matched"] = result.matched;
  j["method"] = match_method_name(result.method);
  j["direction"] = match_direction_name(result.direction);
  if (result.matched && result.entry && index != nullptr) {
    const CausalityPair& pair = index->pool().entries[*result.entry];
    j["cause"] = event_to_json(pair.cause);
    j["effect"] = event_to_json(pair.effect);
    j["lift"] = pair.lift;
  }
  // Similarities are part of the record only for embedded matches; exact and
  // default results serialize identically for either matcher backend.
  if (result.method == MatchMethod::embedded && result.sims) {
    j["sims"] = {result.sims->first, result.sims->second};
  }
  return j;
}

json rerank_result_to_json(const RerankResult& result, const RerankItem& item,
                           const CausalityIndex* index) {
  json candidates = json::array();
  for (const ScoredCandidate& sc : result.ranking) {
    const Candidate& c = item.candidates[sc.candidate_index];
    json jc;
    jc["text"] = c.text;
    jc["log_prob"] = c.log_prob;
    jc["original_rank"] = c.original_rank;
    jc["score"] = sc.score;
    jc["effective_lift"] = sc.best_match.effective_lift;
    jc["method"] = match_method_name(sc.best_match.method);
    candidates.push_back(std::move(jc));
  }

  json j;
  j["schema"] = kRerankSchema;
  j["id"] = result.id;
  j["reranked"] = result.reranked;
  j["chosen"] = item.candidates[result.ranking.front().candidate_index].text;
  j["candidates"] = std::move(candidates);

  const ScoredCandidate& top = result.ranking.front();
  if (top.best_match.matched && top.best_pair) {
    json expl = match_result_to_json(top.best_match, index);
    expl["history_event"] = event_to_json(top.best_pair->first);
    expl["response_event"] = event_to_json(top.best_pair->second);
    j["explanation"] = std::move(expl);
  } else {
    j["explanation"] = nullptr;
  }
  return j;
}

EvalPair eval_pair_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::parse, "evaluation record must be a JSON object");
  EvalPair pair;
  const json& history = require(j, "history");
  if (!history.is_array()) {
    fail(ErrorCode::parse, "'history' must be an array of utterances");
  }
  for (const json& u : history) pair.history.push_back(tokens_from_json(u, "history"));
  pair.reference = tokens_from_json(require(j, "reference"), "reference");
  pair.before = tokens_from_json(require(j, "before"), "before");
  pair.after = tokens_from_json(require(j, "after"), "after");
  if (auto it = j.find("nbest"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::parse, "'nbest' must be an array");
    for (const json& c : *it) pair.nbest.push_back(tokens_from_json(c, "nbest"));
  }
  return pair;
}

}  // namespace crk
