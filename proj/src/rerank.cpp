#include "causerank/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_set>

#include "causerank/error.hpp"

namespace crk {

void RerankConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::invalid, "lambda must be a finite real >= 0");
  }
  if (history_window < 1) {
    fail(ErrorCode::invalid, "history_window must be >= 1");
  }
  match.validate();
}

ScoredCandidate score_candidate(const Candidate& candidate,
                                const std::vector<Event>& history_events,
                                const Matcher& matcher, const RerankConfig& cfg) {
  if (!(candidate.log_prob <= 0.0) || !std::isfinite(candidate.log_prob)) {
    fail(ErrorCode::invalid,
         "candidate log_prob must be finite and <= 0 (p = 0 is rejected)");
  }

  ScoredCandidate scored;
  scored.best_match = [&] {
    MatchResult def;
    const MatchConfig& mc = matcher.config();
    def.effective_lift = std::max(mc.default_lift, mc.min_effective_lift);
    def.method = MatchMethod::fallback;
    return def;
  }();

  for (const Event& h : history_events) {
    for (const Event& r : candidate.events) {
      MatchResult m = matcher.match(h, r);
      // Strictly higher lift wins; a real match beats the unmatched default
      // at equal lift; otherwise the first-seen pair stands.
      bool improves = m.effective_lift > scored.best_match.effective_lift ||
                      (m.matched && !scored.best_match.matched &&
                       m.effective_lift == scored.best_match.effective_lift);
      if (improves) {
        scored.best_match = m;
        scored.best_pair = std::make_pair(h, r);
      }
    }
  }

  const double log2_p = candidate.log_prob / std::numbers::ln2;
  const double denom = std::pow(std::log2(scored.best_match.effective_lift), cfg.lambda);
  scored.score = log2_p / denom;
  return scored;
}

RerankResult rerank(const RerankItem& item, const Matcher& matcher, const RerankConfig& cfg) {
  cfg.validate();
  if (item.candidates.empty()) {
    fail(ErrorCode::invalid, "item '" + item.id + "' has no candidates");
  }
  {
    std::set<int> ranks;
    for (const Candidate& c : item.candidates) {
      if (!ranks.insert(c.original_rank).second) {
        fail(ErrorCode::invalid, "item '" + item.id + "' has duplicate original_rank " +
                                     std::to_string(c.original_rank));
      }
    }
  }
  for (size_t i = 1; i < item.candidates.size(); ++i) {
    if (item.candidates[i].original_rank < item.candidates[i - 1].original_rank) {
      fail(ErrorCode::invalid, "item '" + item.id + "' candidates not sorted by original_rank");
    }
  }

  // Pool events from the last history_window utterances, first occurrence
  // wins (equal events share a key, so deduplication cannot change scores).
  std::vector<Event> history_events;
  std::unordered_set<std::string> seen_keys;
  size_t window = std::min<size_t>(item.history.size(), static_cast<size_t>(cfg.history_window));
  for (size_t i = item.history.size() - window; i < item.history.size(); ++i) {
    for (const Event& e : item.history[i].events) {
      if (seen_keys.insert(event_key(e)).second) history_events.push_back(e);
    }
  }

  RerankResult result;
  result.id = item.id;
  result.ranking.reserve(item.candidates.size());
  for (size_t i = 0; i < item.candidates.size(); ++i) {
    ScoredCandidate scored = score_candidate(item.candidates[i], history_events, matcher, cfg);
    scored.candidate_index = static_cast<int>(i);
    result.ranking.push_back(std::move(scored));
  }

  std::sort(result.ranking.begin(), result.ranking.end(),
            [&](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return item.candidates[a.candidate_index].original_rank <
                     item.candidates[b.candidate_index].original_rank;
            });

  int min_rank = item.candidates.front().original_rank;
  for (const Candidate& c : item.candidates) min_rank = std::min(min_rank, c.original_rank);
  result.reranked =
      item.candidates[result.ranking.front().candidate_index].original_rank != min_rank;
  return result;
}

double reranked_ratio(const std::vector<RerankResult>& results) {
  if (results.empty()) fail(ErrorCode::invalid, "reranked_ratio of an empty result list");
  size_t changed = 0;
  for (const RerankResult& r : results) {
    if (r.reranked) ++changed;
  }
  return static_cast<double>(changed) / static_cast<double>(results.size());
}

}  // namespace crk
