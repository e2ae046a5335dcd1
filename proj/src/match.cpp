#include "causerank/match.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/vec.hpp"

namespace crk {

void MatchConfig::validate() const {
  if (!(similarity_threshold >= 0.0 && similarity_threshold <= 1.0)) {
    fail(ErrorCode::invalid, "similarity_threshold must be in [0, 1]");
  }
  if (!(default_lift > 1.0) || !std::isfinite(default_lift)) {
    fail(ErrorCode::invalid, "default_lift must be a finite real > 1");
  }
  if (!(min_effective_lift >= default_lift) || !std::isfinite(min_effective_lift)) {
    fail(ErrorCode::invalid, "min_effective_lift must be >= default_lift");
  }
}

const char* match_method_name(MatchMethod m) {
  switch (m) {
    case MatchMethod::exact: return "exact";
    case MatchMethod::embedded: return "embedded";
    case MatchMethod::fallback: return "default";
  }
  return "?";
}

const char* match_direction_name(MatchDirection d) {
  switch (d) {
    case MatchDirection::forward: return "forward";
    case MatchDirection::inverse: return "inverse";
    case MatchDirection::none: return "none";
  }
  return "?";
}

namespace {

MatchResult default_result(const MatchConfig& cfg) {
  MatchResult r;
  r.effective_lift = std::max(cfg.default_lift, cfg.min_effective_lift);
  r.matched = false;
  r.direction = MatchDirection::none;
  r.method = MatchMethod::fallback;
  return r;
}

// Shared scoring expression; both search paths must call exactly this.
inline double pair_score(double lift, double sim_a, double sim_b, MatchObjective objective) {
  double mean = (sim_a + sim_b) * 0.5;
  return objective == MatchObjective::lift_emb ? lift * mean : mean;
}

struct BestCandidate {
  bool found = false;
  double score = 0.0;
  uint32_t entry = 0;
  MatchDirection direction = MatchDirection::none;
  double sim_a = 0.0;
  double sim_b = 0.0;

  // Deterministic winner: higher score, then lower pool index, then forward
  // before inverse. Identical in both search paths.
  void consider(double s, uint32_t e, MatchDirection d, double a, double b) {
    bool better = !found || s > score ||
                  (s == score && (e < entry || (e == entry && d == MatchDirection::forward &&
                                                direction == MatchDirection::inverse)));
    if (better) {
      found = true;
      score = s;
      entry = e;
      direction = d;
      sim_a = a;
      sim_b = b;
    }
  }
};

}  // namespace

void CausalityIndex::finalize_derived() {
  const auto& entries = pool_->entries;
  lifts_.resize(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) lifts_[i] = entries[i].lift;

  exact_.clear();
  exact_.reserve(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    std::string key = pair_key(entries[i].cause, entries[i].effect);
    auto [it, inserted] = exact_.try_emplace(std::move(key), static_cast<uint32_t>(i));
    if (!inserted && entries[i].lift > entries[it->second].lift) {
      it->second = static_cast<uint32_t>(i);
    }
  }

  lift_order_.resize(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) lift_order_[i] = static_cast<uint32_t>(i);
  std::sort(lift_order_.begin(), lift_order_.end(), [this](uint32_t a, uint32_t b) {
    if (lifts_[a] != lifts_[b]) return lifts_[a] > lifts_[b];
    return a < b;
  });
}

namespace {

// Deduplicates normalized embeddings by byte equality so every entry sharing
// an event vector points at one representative. dot(query, representative)
// is then bit-identical to dot(query, entry vector).
struct RepTable {
  size_t dim;
  std::vector<double> reps;
  std::unordered_map<std::string, int32_t> ids;

  explicit RepTable(size_t d) : dim(d) {}

  int32_t intern(const std::vector<double>& normalized_vec) {
    std::string bytes(reinterpret_cast<const char*>(normalized_vec.data()),
                      normalized_vec.size() * sizeof(double));
    auto [it, inserted] = ids.try_emplace(std::move(bytes),
                                          static_cast<int32_t>(reps.size() / dim));
    if (inserted) {
      reps.insert(reps.end(), normalized_vec.begin(), normalized_vec.end());
    }
    return it->second;
  }
};

}  // namespace

CausalityIndex CausalityIndex::build(std::shared_ptr<const CausalityPool> pool,
                                     const RftmEmbedder& embedder, int threads) {
  if (!pool) fail(ErrorCode::invalid, "index build: null pool");
  if (threads < 1) threads = 1;

  CausalityIndex index;
  index.pool_ = std::move(pool);
  index.dim_ = embedder.dim();
  index.pool_checksum_ = crk::pool_checksum(*index.pool_);
  index.weights_checksum_ = embedder.weights().checksum();

  const auto& entries = index.pool_->entries;
  index.cause_gid_.assign(entries.size(), -1);
  index.effect_gid_.assign(entries.size(), -1);

  // Embed each distinct event once. Events repeat heavily in realistic pools,
  // so the unit of parallel work is the distinct event, processed in blocks
  // whose merge order is fixed by first appearance.
  RepTable cause_reps(index.dim_), effect_reps(index.dim_);
  std::unordered_map<std::string, int32_t> cause_by_event, effect_by_event;

  struct Job {
    const Event* event;
    std::vector<double> normalized_vec;
    bool ok = false;
  };

  size_t pos = 0;
  constexpr size_t kBlock = 4096;
  std::vector<Job> jobs;
  while (pos < entries.size()) {
    size_t block_end = std::min(entries.size(), pos + kBlock);
    jobs.clear();
    std::unordered_map<std::string, size_t> job_of_key;
    for (size_t i = pos; i < block_end; ++i) {
      for (const Event* ev : {&entries[i].cause, &entries[i].effect}) {
        std::string key = event_key(*ev);
        bool is_cause = (ev == &entries[i].cause);
        auto& seen = is_cause ? cause_by_event : effect_by_event;
        if (seen.count(key)) continue;
        // Cause and effect representations live in separate tables, so an
        // event appearing on both sides embeds once per side.
        std::string side_key = (is_cause ? "c" : "e") + key;
        if (job_of_key.count(side_key)) continue;
        job_of_key.emplace(std::move(side_key), jobs.size());
        jobs.push_back(Job{ev, {}, false});
      }
    }

    auto run = [&](size_t begin, size_t end) {
      for (size_t j = begin; j < end; ++j) {
        try {
          EventEmbedding emb = embedder.embed(*jobs[j].event);
          jobs[j].normalized_vec = normalized(emb.values);
          jobs[j].ok = true;
        } catch (const Error&) {
          jobs[j].ok = false;
        }
      }
    };
    size_t n_jobs = jobs.size();
    size_t use_threads = std::min<size_t>(threads, n_jobs > 0 ? n_jobs : 1);
    if (use_threads <= 1) {
      run(0, n_jobs);
    } else {
      std::vector<std::thread> pool_threads;
      size_t chunk = (n_jobs + use_threads - 1) / use_threads;
      for (size_t t = 0; t < use_threads; ++t) {
        size_t begin = t * chunk;
        size_t end = std::min(n_jobs, begin + chunk);
        if (begin < end) pool_threads.emplace_back(run, begin, end);
      }
      for (auto& th : pool_threads) th.join();
    }

    // Merge in first-appearance order, then resolve the block's entries.
    for (size_t i = pos; i < block_end; ++i) {
      for (const Event* ev : {&entries[i].cause, &entries[i].effect}) {
        bool is_cause = (ev == &entries[i].cause);
        std::string key = event_key(*ev);
        auto& seen = is_cause ? cause_by_event : effect_by_event;
        if (!seen.count(key)) {
          const Job& job = jobs[job_of_key.at((is_cause ? "c" : "e") + key)];
          int32_t gid = -1;
          if (job.ok) {
            gid = (is_cause ? cause_reps : effect_reps).intern(job.normalized_vec);
          }
          seen.emplace(key, gid);
        }
        int32_t gid = seen.at(key);
        (is_cause ? index.cause_gid_ : index.effect_gid_)[i] = gid;
      }
    }
    pos = block_end;
  }

  for (size_t i = 0; i < entries.size(); ++i) {
    if (index.cause_gid_[i] >= 0 && index.effect_gid_[i] >= 0) {
      ++index.embedded_count_;
    } else {
      ++index.embed_failures_;
      // An entry needs both sides; drop the one that did embed.
      index.cause_gid_[i] = -1;
      index.effect_gid_[i] = -1;
    }
  }

  index.cause_reps_ = std::move(cause_reps.reps);
  index.effect_reps_ = std::move(effect_reps.reps);
  index.finalize_derived();
  return index;
}

namespace {
constexpr char kIndexMagic[8] = {'C', 'R', 'K', 'I', 'D', 'X', '0', '1'};
constexpr uint32_t kIndexVersion = 1;
}  // namespace

void CausalityIndex::save(const std::string& path) const {
  ByteWriter w;
  w.raw(kIndexMagic, sizeof(kIndexMagic));
  w.u32(kIndexVersion);
  w.u32(static_cast<uint32_t>(dim_));
  w.u64(pool_checksum_);
  w.u64(weights_checksum_);
  w.u64(pred_store_checksum_);
  w.u64(arg_store_checksum_);
  w.u64(pool_->entries.size());
  w.u64(embedded_count_);
  w.u64(embed_failures_);
  w.u64(cause_reps_.size() / (dim_ ? dim_ : 1));
  w.u64(effect_reps_.size() / (dim_ ? dim_ : 1));
  for (double x : cause_reps_) w.f64(x);
  for (double x : effect_reps_) w.f64(x);
  for (int32_t g : cause_gid_) w.i32(g);
  for (int32_t g : effect_gid_) w.i32(g);
  Fnv1a64 fnv;
  fnv.update(w.bytes().data(), w.bytes().size());
  w.u64(fnv.digest());
  write_file(path, w.bytes());
}

CausalityIndex CausalityIndex::open(std::shared_ptr<const CausalityPool> pool,
                                    const RftmEmbedder& embedder, const std::string& path) {
  if (!pool) fail(ErrorCode::invalid, "index open: null pool");
  std::string bytes = read_file(path);
  if (bytes.size() < sizeof(kIndexMagic) + 8) {
    fail(ErrorCode::parse, "index cache too short: " + path);
  }
  Fnv1a64 fnv;
  fnv.update(bytes.data(), bytes.size() - 8);
  ByteReader r(bytes);
  if (std::string_view(r.raw(sizeof(kIndexMagic))) != std::string_view(kIndexMagic, 8)) {
    fail(ErrorCode::parse, "not an index cache (bad magic): " + path);
  }
  if (r.u32() != kIndexVersion) {
    fail(ErrorCode::parse, "unsupported index cache version: " + path);
  }

  CausalityIndex index;
  index.pool_ = std::move(pool);
  index.dim_ = r.u32();
  index.pool_checksum_ = r.u64();
  index.weights_checksum_ = r.u64();
  index.pred_store_checksum_ = r.u64();
  index.arg_store_checksum_ = r.u64();

  if (index.dim_ != embedder.dim()) {
    fail(ErrorCode::state, "index cache dimension mismatch: " + path);
  }
  if (index.pool_checksum_ != crk::pool_checksum(*index.pool_)) {
    fail(ErrorCode::state, "index cache is stale: pool checksum mismatch: " + path);
  }
  if (index.weights_checksum_ != embedder.weights().checksum()) {
    fail(ErrorCode::state, "index cache is stale: weight checksum mismatch: " + path);
  }

  uint64_t n_entries = r.u64();
  if (n_entries != index.pool_->entries.size()) {
    fail(ErrorCode::state, "index cache entry count mismatch: " + path);
  }
  index.embedded_count_ = r.u64();
  index.embed_failures_ = r.u64();
  uint64_t n_cause = r.u64();
  uint64_t n_effect = r.u64();
  size_t expected = sizeof(kIndexMagic) + 4 * 2 + 8 * 4 + 8 * 5 +
                    8 * (n_cause + n_effect) * index.dim_ + 4 * 2 * n_entries + 8;
  if (bytes.size() != expected) {
    fail(ErrorCode::parse, "index cache has wrong size (corrupted?): " + path);
  }
  index.cause_reps_.resize(n_cause * index.dim_);
  for (double& x : index.cause_reps_) x = r.f64();
  index.effect_reps_.resize(n_effect * index.dim_);
  for (double& x : index.effect_reps_) x = r.f64();
  index.cause_gid_.resize(n_entries);
  for (int32_t& g : index.cause_gid_) g = r.i32();
  index.effect_gid_.resize(n_entries);
  for (int32_t& g : index.effect_gid_) g = r.i32();
  if (r.u64() != fnv.digest()) {
    fail(ErrorCode::state, "index cache checksum mismatch (corrupted): " + path);
  }
  index.finalize_derived();
  return index;
}

std::optional<uint32_t> CausalityIndex::exact_entry(const Event& cause,
                                                    const Event& effect) const {
  auto it = exact_.find(pair_key(cause, effect));
  if (it == exact_.end()) return std::nullopt;
  return it->second;
}

MatchResult exact_lift(const Event& history_event, const Event& response_event,
                       const CausalityIndex& index, const MatchConfig& cfg) {
  auto make_hit = [&](uint32_t entry, MatchDirection dir) {
    MatchResult r;
    r.effective_lift = std::max(index.pool().entries[entry].lift, cfg.min_effective_lift);
    r.matched = true;
    r.entry = entry;
    r.direction = dir;
    r.method = MatchMethod::exact;
    return r;
  };
  if (auto e = index.exact_entry(history_event, response_event)) {
    return make_hit(*e, MatchDirection::forward);
  }
  if (cfg.allow_inverse) {
    if (auto e = index.exact_entry(response_event, history_event)) {
      return make_hit(*e, MatchDirection::inverse);
    }
  }
  return default_result(cfg);
}

namespace {

struct EmbeddedQuery {
  std::vector<double> history;   // unit-normalized (zero vector stays zero)
  std::vector<double> response;
};

MatchResult finish_embedded(const BestCandidate& best, const CausalityIndex& index,
                            const MatchConfig& cfg) {
  const double lift = index.pool().entries[best.entry].lift;
  double mean = (best.sim_a + best.sim_b) * 0.5;
  MatchResult r;
  r.effective_lift = std::max(lift * mean, cfg.min_effective_lift);
  r.matched = true;
  r.entry = best.entry;
  r.direction = best.direction;
  r.sims = std::make_pair(best.sim_a, best.sim_b);
  r.method = MatchMethod::embedded;
  return r;
}

}  // namespace

MatchResult lift_emb(const Event& history_event, const Event& response_event,
                     const CausalityIndex& index, const MatchConfig& cfg,
                     const RftmEmbedder& embedder) {
  // Exact key hits short-circuit with the raw pool lift (both sims are 1 by
  // construction, so Eq-style discounting changes nothing).
  {
    MatchResult exact = exact_lift(history_event, response_event, index, cfg);
    if (exact.matched) {
      exact.sims = std::make_pair(1.0, 1.0);
      return exact;
    }
  }

  EmbeddedQuery q;
  try {
    q.history = normalized(embedder.embed(history_event).values);
    q.response = normalized(embedder.embed(response_event).values);
  } catch (const Error&) {
    return default_result(cfg);  // unembeddable query events fall back
  }

  const size_t d = index.dim_;
  const double tau = cfg.similarity_threshold;
  const auto& cause_gid = index.cause_gid_;
  const auto& effect_gid = index.effect_gid_;
  const auto& lifts = index.lifts_;
  const size_t n = cause_gid.size();

  auto cause_rep = [&](int32_t g) {
    return std::span<const double>(index.cause_reps_.data() + static_cast<size_t>(g) * d, d);
  };
  auto effect_rep = [&](int32_t g) {
    return std::span<const double>(index.effect_reps_.data() + static_cast<size_t>(g) * d, d);
  };

  BestCandidate best;

  if (cfg.search == SearchPath::brute) {
    // Reference scan: ascending pool order, every entry, no shortcuts.
    for (size_t i = 0; i < n; ++i) {
      int32_t cg = cause_gid[i];
      int32_t eg = effect_gid[i];
      if (cg < 0 || eg < 0) continue;
      double s1 = dot(q.history, cause_rep(cg));
      double s2 = dot(q.response, effect_rep(eg));
      if (s1 >= tau && s2 >= tau) {
        best.consider(pair_score(lifts[i], s1, s2, cfg.objective), static_cast<uint32_t>(i),
                      MatchDirection::forward, s1, s2);
      }
      if (cfg.allow_inverse) {
        double t1 = dot(q.response, cause_rep(cg));
        double t2 = dot(q.history, effect_rep(eg));
        if (t1 >= tau && t2 >= tau) {
          best.consider(pair_score(lifts[i], t1, t2, cfg.objective), static_cast<uint32_t>(i),
                        MatchDirection::inverse, t1, t2);
        }
      }
    }
  } else {
    // Pruned scan: one dot per distinct embedding per query side, then a
    // cheap walk over entries in descending-lift order.
    size_t n_cause = index.cause_reps_.size() / (d ? d : 1);
    size_t n_effect = index.effect_reps_.size() / (d ? d : 1);
    std::vector<double> h_cause(n_cause), r_effect(n_effect);
    for (size_t g = 0; g < n_cause; ++g) h_cause[g] = dot(q.history, cause_rep(static_cast<int32_t>(g)));
    for (size_t g = 0; g < n_effect; ++g) r_effect[g] = dot(q.response, effect_rep(static_cast<int32_t>(g)));
    std::vector<double> r_cause, h_effect;
    if (cfg.allow_inverse) {
      r_cause.resize(n_cause);
      h_effect.resize(n_effect);
      for (size_t g = 0; g < n_cause; ++g) r_cause[g] = dot(q.response, cause_rep(static_cast<int32_t>(g)));
      for (size_t g = 0; g < n_effect; ++g) h_effect[g] = dot(q.history, effect_rep(static_cast<int32_t>(g)));
    }

    // Termination bound: sims of unit vectors cannot exceed 1 + tiny rounding,
    // so once lift*(1+margin) falls below the best score no later entry in
    // descending-lift order can win or tie. Only valid for the lift_emb
    // objective, where score <= lift * max_sim.
    const bool can_terminate = cfg.objective == MatchObjective::lift_emb;
    constexpr double kSimSlack = 1.0 + 1e-9;

    for (uint32_t i : index.lift_order_) {
      int32_t cg = cause_gid[i];
      int32_t eg = effect_gid[i];
      if (can_terminate && best.found && lifts[i] * kSimSlack < best.score) break;
      if (cg < 0 || eg < 0) continue;
      double s1 = h_cause[static_cast<size_t>(cg)];
      double s2 = r_effect[static_cast<size_t>(eg)];
      if (s1 >= tau && s2 >= tau) {
        best.consider(pair_score(lifts[i], s1, s2, cfg.objective), i, MatchDirection::forward,
                      s1, s2);
      }
      if (cfg.allow_inverse) {
        double t1 = r_cause[static_cast<size_t>(cg)];
        double t2 = h_effect[static_cast<size_t>(eg)];
        if (t1 >= tau && t2 >= tau) {
          best.consider(pair_score(lifts[i], t1, t2, cfg.objective), i, MatchDirection::inverse,
                        t1, t2);
        }
      }
    }
  }

  if (!best.found) return default_result(cfg);
  return finish_embedded(best, index, cfg);
}

}  // namespace crk
