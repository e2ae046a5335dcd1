#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crk::test {

double oracle_cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

std::vector<double> oracle_tensor_apply(const RftmWeights& weights,
                                        const std::vector<double>& v_p,
                                        const std::vector<double>& v_a) {
  size_t d = weights.dim;
  std::vector<double> out(d, 0.0);
  for (size_t j = 0; j < d; ++j) {
    for (size_t i = 0; i < d; ++i) {
      double pa = v_p[i] * v_a[j];
      for (size_t k = 0; k < d; ++k) {
        out[k] += weights.tensor[(k * d + i) * d + j] * pa;
      }
    }
  }
  return out;
}

OracleMatch oracle_lift_emb(const Event& history_event, const Event& response_event,
                            const CausalityPool& pool, const RftmEmbedder& embedder,
                            double threshold, bool allow_inverse, double default_lift,
                            double min_effective_lift) {
  OracleMatch result;
  result.effective_lift = std::max(default_lift, min_effective_lift);

  // Exact hits first, mirroring the short-circuit semantics (max lift wins
  // among duplicate keys; the pool is already collapsed, so direct compare).
  for (size_t i = 0; i < pool.entries.size(); ++i) {
    const CausalityPair& p = pool.entries[i];
    if (p.cause == history_event && p.effect == response_event) {
      result.matched = true;
      result.entry = static_cast<uint32_t>(i);
      result.inverse = false;
      result.effective_lift = std::max(p.lift, min_effective_lift);
      return result;
    }
  }
  if (allow_inverse) {
    for (size_t i = 0; i < pool.entries.size(); ++i) {
      const CausalityPair& p = pool.entries[i];
      if (p.cause == response_event && p.effect == history_event) {
        result.matched = true;
        result.entry = static_cast<uint32_t>(i);
        result.inverse = true;
        result.effective_lift = std::max(p.lift, min_effective_lift);
        return result;
      }
    }
  }

  std::vector<double> h, r;
  try {
    h = embedder.embed(history_event).values;
    r = embedder.embed(response_event).values;
  } catch (...) {
    return result;
  }

  double best_score = -1.0;
  for (size_t i = 0; i < pool.entries.size(); ++i) {
    std::vector<double> cause, effect;
    try {
      cause = embedder.embed(pool.entries[i].cause).values;
      effect = embedder.embed(pool.entries[i].effect).values;
    } catch (...) {
      continue;
    }
    double lift = pool.entries[i].lift;
    double s1 = oracle_cosine(h, cause);
    double s2 = oracle_cosine(r, effect);
    if (s1 >= threshold && s2 >= threshold) {
      double score = lift * (s1 + s2) / 2.0;
      if (score > best_score) {
        best_score = score;
        result.matched = true;
        result.entry = static_cast<uint32_t>(i);
        result.inverse = false;
      }
    }
    if (allow_inverse) {
      double t1 = oracle_cosine(r, cause);
      double t2 = oracle_cosine(h, effect);
      if (t1 >= threshold && t2 >= threshold) {
        double score = lift * (t1 + t2) / 2.0;
        if (score > best_score) {
          best_score = score;
          result.matched = true;
          result.entry = static_cast<uint32_t>(i);
          result.inverse = true;
        }
      }
    }
  }
  if (best_score >= 0.0) {
    result.effective_lift = std::max(best_score, min_effective_lift);
  }
  return result;
}

double oracle_dist_n(const std::vector<Tokens>& responses, int n) {
  std::set<std::vector<std::string>> distinct;
  double total = 0.0;
  for (const Tokens& r : responses) {
    for (size_t i = 0; i + n <= r.size(); ++i) {
      distinct.insert(std::vector<std::string>(r.begin() + i, r.begin() + i + n));
      total += 1.0;
    }
  }
  return static_cast<double>(distinct.size()) / total;
}

namespace {

std::map<std::vector<std::string>, int> ngram_multiset(const Tokens& tokens, int n) {
  std::map<std::vector<std::string>, int> grams;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++grams[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return grams;
}

}  // namespace

double oracle_bleu(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n) {
  double hyp_len = 0.0, ref_len = 0.0;
  std::vector<double> clipped(max_n + 1, 0.0), totals(max_n + 1, 0.0);
  for (const auto& [ref, hyp] : corpus) {
    hyp_len += static_cast<double>(hyp.size());
    ref_len += static_cast<double>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      auto ref_grams = ngram_multiset(ref, n);
      auto hyp_grams = ngram_multiset(hyp, n);
      for (const auto& [gram, count] : hyp_grams) {
        totals[n] += count;
        auto it = ref_grams.find(gram);
        if (it != ref_grams.end()) clipped[n] += std::min(count, it->second);
      }
    }
  }
  if (hyp_len == 0.0) return 0.0;
  double geo = 1.0;
  for (int n = 1; n <= max_n; ++n) {
    double num = clipped[n] + (n >= 2 ? 1.0 : 0.0);
    double den = totals[n] + (n >= 2 ? 1.0 : 0.0);
    if (num == 0.0 || den == 0.0) return 0.0;
    geo *= std::pow(num / den, 1.0 / max_n);
  }
  double bp = hyp_len < ref_len ? std::exp(1.0 - ref_len / hyp_len) : 1.0;
  return 100.0 * bp * geo;
}

double oracle_nist(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n) {
  std::vector<std::map<std::vector<std::string>, int>> ref_stats(max_n + 1);
  double ref_words = 0.0;
  for (const auto& [ref, hyp] : corpus) {
    ref_words += static_cast<double>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      for (const auto& [gram, count] : ngram_multiset(ref, n)) ref_stats[n][gram] += count;
    }
  }

  double score = 0.0;
  double hyp_len = 0.0, ref_len = 0.0;
  std::vector<double> info_sums(max_n + 1, 0.0), hyp_counts(max_n + 1, 0.0);
  for (const auto& [ref, hyp] : corpus) {
    hyp_len += static_cast<double>(hyp.size());
    ref_len += static_cast<double>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      auto ref_grams = ngram_multiset(ref, n);
      auto hyp_grams = ngram_multiset(hyp, n);
      for (const auto& [gram, count] : hyp_grams) {
        hyp_counts[n] += count;
        auto it = ref_grams.find(gram);
        if (it == ref_grams.end()) continue;
        int matched = std::min(count, it->second);
        std::vector<std::string> prefix(gram.begin(), gram.end() - 1);
        double parent = n == 1 ? ref_words : static_cast<double>(ref_stats[n - 1].at(prefix));
        double info = std::log2(parent / static_cast<double>(ref_stats[n].at(gram)));
        info_sums[n] += info * matched;
      }
    }
  }
  for (int n = 1; n <= max_n; ++n) {
    if (hyp_counts[n] > 0.0) score += info_sums[n] / hyp_counts[n];
  }
  if (hyp_len == 0.0 || ref_len == 0.0) return 0.0;
  double ratio = std::min(1.0, hyp_len / ref_len);
  double beta = std::log(0.5) / (std::log(2.0 / 3.0) * std::log(2.0 / 3.0));
  return score * std::exp(beta * std::log(ratio) * std::log(ratio));
}

std::vector<double> oracle_extrema(
    const Tokens& sentence,
    const std::vector<std::pair<std::string, std::vector<double>>>& vocab) {
  std::vector<const std::vector<double>*> present;
  for (const std::string& token : sentence) {
    for (const auto& [word, vec] : vocab) {
      if (word == token) {
        present.push_back(&vec);
        break;
      }
    }
  }
  size_t d = present.front()->size();
  std::vector<double> out(d);
  for (size_t dim = 0; dim < d; ++dim) {
    double mx = (*present.front())[dim], mn = (*present.front())[dim];
    for (const auto* vec : present) {
      mx = std::max(mx, (*vec)[dim]);
      mn = std::min(mn, (*vec)[dim]);
    }
    out[dim] = mx > std::fabs(mn) ? mx : mn;
  }
  return out;
}

OraclePmi::OraclePmi(const std::vector<std::pair<Tokens, Tokens>>& corpus, double smoothing)
    : smoothing_(smoothing) {
  for (const auto& [history, response] : corpus) {
    std::set<std::string> hw(history.begin(), history.end());
    std::set<std::string> rw(response.begin(), response.end());
    for (const std::string& r : rw) {
      for (const std::string& h : hw) {
        counts_[{r, h}] += 1.0;
        r_counts_[r] += 1.0;
        h_counts_[h] += 1.0;
        total_ += 1.0;
      }
    }
  }
}

double OraclePmi::pmi(const std::string& wr, const std::string& wh) const {
  double vr = static_cast<double>(r_counts_.size());
  double vh = static_cast<double>(h_counts_.size());
  double denom = total_ + smoothing_ * vr * vh;
  auto count_of = [](const auto& m, const auto& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  };
  double joint = (count_of(counts_, std::make_pair(wr, wh)) + smoothing_) / denom;
  double pr = (count_of(r_counts_, wr) + smoothing_ * vh) / denom;
  double ph = (count_of(h_counts_, wh) + smoothing_ * vr) / denom;
  return std::log(joint / (pr * ph));
}

double OraclePmi::score(const Tokens& response, const Tokens& history) const {
  double sum = 0.0;
  for (const std::string& wr : response) {
    double best = pmi(wr, history.front());
    for (const std::string& wh : history) best = std::max(best, pmi(wr, wh));
    sum += best;
  }
  return sum / static_cast<double>(response.size());
}

double oracle_score(double log_prob_natural, double effective_lift, double lambda) {
  double log2_p = log_prob_natural / std::log(2.0);
  return log2_p / std::pow(std::log2(effective_lift), lambda);
}

}  // namespace crk::test
