#include "causerank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "causerank/error.hpp"
#include "causerank/vec.hpp"

namespace crk {

namespace {

// n-grams as '\x1f'-joined tokens; cheap and collision-free for a separator
// that cannot appear inside whitespace tokens.
std::string join_ngram(const Tokens& tokens, size_t start, int n) {
  std::string out;
  for (int k = 0; k < n; ++k) {
    if (k > 0) out.push_back('\x1f');
    out += tokens[start + k];
  }
  return out;
}

void check_n(int n) {
  if (n < 1) fail(ErrorCode::invalid, "n-gram order must be >= 1");
}

}  // namespace

double dist_n(const std::vector<Tokens>& responses, int n) {
  check_n(n);
  std::unordered_set<std::string> distinct;
  size_t total = 0;
  for (const Tokens& tokens : responses) {
    if (tokens.size() < static_cast<size_t>(n)) continue;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      distinct.insert(join_ngram(tokens, i, n));
      ++total;
    }
  }
  if (total == 0) {
    fail(ErrorCode::invalid, "dist-" + std::to_string(n) + ": no n-grams in the response set");
  }
  return static_cast<double>(distinct.size()) / static_cast<double>(total);
}

double avg_internal_dist(const std::vector<std::vector<Tokens>>& nbest_lists, int n) {
  if (nbest_lists.empty()) fail(ErrorCode::invalid, "avg_internal_dist of an empty list");
  double sum = 0.0;
  for (const auto& list : nbest_lists) sum += dist_n(list, n);
  return sum / static_cast<double>(nbest_lists.size());
}

std::vector<double> vector_extrema(const Tokens& sentence, const VectorStore& store) {
  size_t d = store.dim();
  std::vector<double> maxv, minv;
  size_t found = 0;
  for (const std::string& token : sentence) {
    auto vec = store.lookup(token);
    if (!vec) continue;
    if (found == 0) {
      maxv.assign(vec->begin(), vec->end());
      minv.assign(vec->begin(), vec->end());
    } else {
      for (size_t i = 0; i < d; ++i) {
        maxv[i] = std::max(maxv[i], (*vec)[i]);
        minv[i] = std::min(minv[i], (*vec)[i]);
      }
    }
    ++found;
  }
  if (found == 0) {
    fail(ErrorCode::oov, "vector_extrema: no in-vocabulary token in sentence");
  }
  std::vector<double> extrema(d);
  for (size_t i = 0; i < d; ++i) {
    extrema[i] = maxv[i] > std::fabs(minv[i]) ? maxv[i] : minv[i];
  }
  return extrema;
}

double extrema_score(const Tokens& reference, const Tokens& hypothesis,
                     const VectorStore& store) {
  std::vector<double> ref = vector_extrema(reference, store);
  std::vector<double> hyp = vector_extrema(hypothesis, store);
  return cosine(ref, hyp);
}

double bleu(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n) {
  if (corpus.empty()) fail(ErrorCode::invalid, "bleu of an empty corpus");
  if (max_n < 1) fail(ErrorCode::invalid, "bleu max_n must be >= 1");

  std::vector<size_t> matched(max_n + 1, 0), total(max_n + 1, 0);
  size_t hyp_len = 0, ref_len = 0;
  for (const auto& [reference, hypothesis] : corpus) {
    hyp_len += hypothesis.size();
    ref_len += reference.size();
    for (int n = 1; n <= max_n; ++n) {
      std::unordered_map<std::string, size_t> ref_counts;
      if (reference.size() >= static_cast<size_t>(n)) {
        for (size_t i = 0; i + n <= reference.size(); ++i) {
          ++ref_counts[join_ngram(reference, i, n)];
        }
      }
      std::unordered_map<std::string, size_t> hyp_counts;
      if (hypothesis.size() >= static_cast<size_t>(n)) {
        for (size_t i = 0; i + n <= hypothesis.size(); ++i) {
          ++hyp_counts[join_ngram(hypothesis, i, n)];
          ++total[n];
        }
      }
      for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched[n] += std::min(count, it->second);
      }
    }
  }

  if (hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    double num = static_cast<double>(matched[n]);
    double den = static_cast<double>(total[n]);
    if (n >= 2) {
      num += 1.0;
      den += 1.0;
    }
    if (num == 0.0 || den == 0.0) return 0.0;  // only possible at n = 1
    log_precision += std::log(num / den);
  }
  log_precision /= static_cast<double>(max_n);
  double brevity = hyp_len < ref_len
                       ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len))
                       : 1.0;
  return 100.0 * brevity * std::exp(log_precision);
}

double nist(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n) {
  if (corpus.empty()) fail(ErrorCode::invalid, "nist of an empty corpus");
  if (max_n < 1) fail(ErrorCode::invalid, "nist max_n must be >= 1");

  // Reference-side n-gram statistics for the information weights.
  std::vector<std::unordered_map<std::string, size_t>> ref_ngrams(max_n + 1);
  size_t ref_words = 0;
  for (const auto& [reference, hypothesis] : corpus) {
    ref_words += reference.size();
    for (int n = 1; n <= max_n; ++n) {
      if (reference.size() < static_cast<size_t>(n)) continue;
      for (size_t i = 0; i + n <= reference.size(); ++i) {
        ++ref_ngrams[n][join_ngram(reference, i, n)];
      }
    }
  }
  if (ref_words == 0) fail(ErrorCode::invalid, "nist: empty reference corpus");

  auto info = [&](const Tokens& tokens, size_t start, int n) {
    size_t full = ref_ngrams[n].at(join_ngram(tokens, start, n));
    double parent = n == 1 ? static_cast<double>(ref_words)
                           : static_cast<double>(ref_ngrams[n - 1].at(join_ngram(tokens, start, n - 1)));
    return std::log2(parent / static_cast<double>(full));
  };

  std::vector<double> info_sum(max_n + 1, 0.0);
  std::vector<size_t> hyp_total(max_n + 1, 0);
  size_t hyp_len = 0, ref_len = 0;
  for (const auto& [reference, hypothesis] : corpus) {
    hyp_len += hypothesis.size();
    ref_len += reference.size();
    for (int n = 1; n <= max_n; ++n) {
      if (hypothesis.size() < static_cast<size_t>(n)) continue;
      std::unordered_map<std::string, size_t> ref_counts;
      if (reference.size() >= static_cast<size_t>(n)) {
        for (size_t i = 0; i + n <= reference.size(); ++i) {
          ++ref_counts[join_ngram(reference, i, n)];
        }
      }
      std::unordered_map<std::string, size_t> used;
      for (size_t i = 0; i + n <= hypothesis.size(); ++i) {
        ++hyp_total[n];
        std::string gram = join_ngram(hypothesis, i, n);
        auto it = ref_counts.find(gram);
        if (it == ref_counts.end()) continue;
        if (used[gram] >= it->second) continue;  // clipped to reference count
        ++used[gram];
        info_sum[n] += info(hypothesis, i, n);
      }
    }
  }

  double score = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    if (hyp_total[n] > 0) score += info_sum[n] / static_cast<double>(hyp_total[n]);
  }

  if (hyp_len == 0 || ref_len == 0) return 0.0;
  double ratio = std::min(1.0, static_cast<double>(hyp_len) / static_cast<double>(ref_len));
  // beta makes the penalty 0.5 at a 2/3 length ratio.
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  double brevity = std::exp(beta * std::pow(std::log(ratio), 2));
  return score * brevity;
}

double avg_length(const std::vector<Tokens>& responses) {
  if (responses.empty()) fail(ErrorCode::invalid, "avg_length of an empty list");
  size_t total = 0;
  for (const Tokens& r : responses) total += r.size();
  return static_cast<double>(total) / static_cast<double>(responses.size());
}

}  // namespace crk
