#pragma once
// Matching (history-event, response-event) pairs against the causality pool:
// exact key lookup and embedding-based search with per-side similarity
// thresholds and inverse-direction handling.
//
// The embedded search has two interchangeable paths. The brute-force scan
// visits every pool entry and is the reference; the pruned path deduplicates
// identical normalized embeddings and walks entries in descending-lift order
// with a safe termination bound. Both share the same dot product, scoring
// expression and winner comparator, so they return identical results bit for
// bit — the pruned path is an optimization, never an approximation.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causerank/event.hpp"
#include "causerank/pool.hpp"
#include "causerank/rftm.hpp"

namespace crk {

enum class MatchObjective { lift_emb, mean_sim };
enum class SearchPath { pruned, brute };

struct MatchConfig {
  double similarity_threshold = 0.86602540378443864676;  // sqrt(3)/2
  double default_lift = 2.0;
  bool allow_inverse = true;
  double min_effective_lift = 2.0;
  MatchObjective objective = MatchObjective::lift_emb;
  SearchPath search = SearchPath::pruned;

  // Throws Error(invalid) when a field is out of its domain.
  void validate() const;
};

enum class MatchMethod { exact, embedded, fallback };
enum class MatchDirection { forward, inverse, none };

const char* match_method_name(MatchMethod m);    // "exact" | "embedded" | "default"
const char* match_direction_name(MatchDirection d);

struct MatchResult {
  double effective_lift = 0.0;
  bool matched = false;
  std::optional<uint32_t> entry;  // index into the pool when matched
  MatchDirection direction = MatchDirection::none;
  std::optional<std::pair<double, double>> sims;  // (cause-side, effect-side)
  MatchMethod method = MatchMethod::fallback;
};

// Precomputed search structures over a pool: normalized cause/effect event
// embeddings (deduplicated by byte equality), an exact-match table, and a
// descending-lift traversal order. Immutable after build.
class CausalityIndex {
 public:
  static CausalityIndex build(std::shared_ptr<const CausalityPool> pool,
                              const RftmEmbedder& embedder, int threads = 1);

  // Cache container: header with pool/weights/store checksums, then the
  // deduplicated embeddings and per-entry group ids. open() re-derives the
  // exact table and lift order from the pool and fails with Error(state) on
  // any checksum mismatch.
  void save(const std::string& path) const;
  static CausalityIndex open(std::shared_ptr<const CausalityPool> pool,
                             const RftmEmbedder& embedder, const std::string& path);

  const CausalityPool& pool() const { return *pool_; }
  size_t entry_count() const { return pool_->entries.size(); }
  size_t embedded_count() const { return embedded_count_; }
  size_t embed_failures() const { return embed_failures_; }
  size_t dim() const { return dim_; }
  uint64_t pool_checksum() const { return pool_checksum_; }
  uint64_t weights_checksum() const { return weights_checksum_; }

  // nullopt when the pair of keys is absent.
  std::optional<uint32_t> exact_entry(const Event& cause, const Event& effect) const;

 private:
  friend MatchResult lift_emb(const Event&, const Event&, const CausalityIndex&,
                              const MatchConfig&, const RftmEmbedder&);
  friend class IndexAccess;  // test-only introspection

  std::shared_ptr<const CausalityPool> pool_;
  size_t dim_ = 0;
  size_t embedded_count_ = 0;
  size_t embed_failures_ = 0;
  uint64_t pool_checksum_ = 0;
  uint64_t weights_checksum_ = 0;
  uint64_t pred_store_checksum_ = 0;
  uint64_t arg_store_checksum_ = 0;

  // Distinct normalized embeddings (byte-deduplicated), then per-entry group
  // ids; -1 marks an entry whose event failed to embed.
  std::vector<double> cause_reps_;
  std::vector<double> effect_reps_;
  std::vector<int32_t> cause_gid_;
  std::vector<int32_t> effect_gid_;
  std::vector<double> lifts_;
  std::vector<uint32_t> lift_order_;  // entry ids, lift descending, index ascending
  std::unordered_map<std::string, uint32_t> exact_;  // pair key -> entry with max lift

  void finalize_derived();  // builds exact_, lift_order_, lifts_ from the pool
};

// Exact-match lift lookup (forward, then inverse when allowed). The returned
// effective_lift is clamped below at cfg.min_effective_lift.
MatchResult exact_lift(const Event& history_event, const Event& response_event,
                       const CausalityIndex& index, const MatchConfig& cfg);

// Embedding-based lift: exact key hits short-circuit with the raw pool lift;
// otherwise the pool is searched for the entry maximizing the configured
// objective among candidates whose two similarities both reach the threshold.
MatchResult lift_emb(const Event& history_event, const Event& response_event,
                     const CausalityIndex& index, const MatchConfig& cfg,
                     const RftmEmbedder& embedder);

}  // namespace crk
