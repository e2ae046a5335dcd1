#pragma once
// PMI coherency between a response and a dialogue history.
//
// Statistics come from (history, response) pairs: count(wr, wh) is the number
// of corpus pairs in which response word wr and history word wh both occur
// (counted once per pair). With N = sum of all co-occurrence counts, Vr/Vh
// the response-/history-side vocabulary sizes and smoothing s > 0:
//
//   joint(wr, wh) = (count(wr, wh) + s) / (N + s*Vr*Vh)
//   p(wr) = (count_r(wr) + s*Vh) / (N + s*Vr*Vh)      (row marginal)
//   p(wh) = (count_h(wh) + s*Vr) / (N + s*Vr*Vh)      (column marginal)
//   PMI(wr, wh) = ln( joint / (p(wr) * p(wh)) )
//
// The marginals are exactly the marginals of the smoothed joint, so PMI is
// finite for every pair; out-of-vocabulary words simply carry zero counts.
// The score of a response is the mean over its words of the best PMI against
// any history word.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "causerank/metrics.hpp"

namespace crk {

class PmiTable {
 public:
  double pmi(const std::string& response_word, const std::string& history_word) const;

  size_t response_vocab() const { return response_ids_.size(); }
  size_t history_vocab() const { return history_ids_.size(); }
  double smoothing() const { return smoothing_; }

 private:
  friend PmiTable build_pmi_table(const std::vector<std::pair<Tokens, Tokens>>& corpus,
                                  double smoothing);

  std::unordered_map<std::string, uint32_t> response_ids_;
  std::unordered_map<std::string, uint32_t> history_ids_;
  std::unordered_map<uint64_t, uint32_t> pair_counts_;  // (rid << 32 | hid) -> count
  std::vector<uint32_t> response_counts_;
  std::vector<uint32_t> history_counts_;
  double total_ = 0.0;
  double smoothing_ = 1.0;
};

// corpus entries are (history tokens, response tokens) pairs.
PmiTable build_pmi_table(const std::vector<std::pair<Tokens, Tokens>>& corpus,
                         double smoothing);

// (1/|response|) * sum over response words of max over history words of PMI.
// Throws Error(invalid) on an empty response or empty history.
double pmi_score(const Tokens& response, const Tokens& history, const PmiTable& table);

}  // namespace crk
