#pragma once
// Candidate scoring and N-best re-ranking.
//
// A candidate's score is (log2 p) / (log2 L*)^lambda where p is the
// generator's posterior probability (supplied as a natural-log value) and L*
// is the largest effective lift over all (history event, candidate event)
// pairs. Unmatched candidates keep L* = default lift 2, making the
// denominator 1 and the score plain log2 p.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causerank/event.hpp"
#include "causerank/match.hpp"

namespace crk {

struct Utterance {
  std::string text;
  std::vector<Event> events;
};

struct Candidate {
  std::string text;
  double log_prob = 0.0;  // natural-log posterior, <= 0 and finite
  std::vector<Event> events;
  int original_rank = 0;
};

struct RerankItem {
  std::string id;
  std::vector<Utterance> history;  // newest last
  std::vector<Candidate> candidates;
};

enum class MatcherKind { exact, embedded };

struct RerankConfig {
  double lambda = 1.0;
  int history_window = 5;
  MatcherKind matcher = MatcherKind::embedded;
  MatchConfig match;
  bool extract_missing_events = false;  // handled by the pipeline layer

  void validate() const;
};

// Narrow interface so scoring code does not care which matcher backs it.
class Matcher {
 public:
  virtual ~Matcher() = default;
  virtual MatchResult match(const Event& history_event, const Event& response_event) const = 0;
  virtual const MatchConfig& config() const = 0;
};

class ExactMatcher final : public Matcher {
 public:
  ExactMatcher(std::shared_ptr<const CausalityIndex> index, MatchConfig cfg)
      : index_(std::move(index)), cfg_(cfg) {}
  MatchResult match(const Event& h, const Event& r) const override {
    return exact_lift(h, r, *index_, cfg_);
  }
  const MatchConfig& config() const override { return cfg_; }

 private:
  std::shared_ptr<const CausalityIndex> index_;
  MatchConfig cfg_;
};

class EmbeddedMatcher final : public Matcher {
 public:
  EmbeddedMatcher(std::shared_ptr<const CausalityIndex> index,
                  std::shared_ptr<const RftmEmbedder> embedder, MatchConfig cfg)
      : index_(std::move(index)), embedder_(std::move(embedder)), cfg_(cfg) {}
  MatchResult match(const Event& h, const Event& r) const override {
    return lift_emb(h, r, *index_, cfg_, *embedder_);
  }
  const MatchConfig& config() const override { return cfg_; }

 private:
  std::shared_ptr<const CausalityIndex> index_;
  std::shared_ptr<const RftmEmbedder> embedder_;
  MatchConfig cfg_;
};

struct ScoredCandidate {
  int candidate_index = 0;  // into RerankItem::candidates
  double score = 0.0;
  MatchResult best_match;
  // The maximizing (history event, response event) pair when matched.
  std::optional<std::pair<Event, Event>> best_pair;
};

struct RerankResult {
  std::string id;
  std::vector<ScoredCandidate> ranking;  // score descending
  bool reranked = false;                 // top-1 differs from the input order
};

ScoredCandidate score_candidate(const Candidate& candidate,
                                const std::vector<Event>& history_events,
                                const Matcher& matcher, const RerankConfig& cfg);

// History events are pooled from the last cfg.history_window utterances.
// Output is ordered by score descending with ties broken by original rank.
// Throws Error(invalid) on an empty candidate list or out-of-domain inputs.
RerankResult rerank(const RerankItem& item, const Matcher& matcher, const RerankConfig& cfg);

// Fraction of items whose top-1 changed; throws Error(invalid) when empty.
double reranked_ratio(const std::vector<RerankResult>& results);

}  // namespace crk
