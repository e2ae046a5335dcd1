#include "causerank/pmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "causerank/error.hpp"

namespace crk {

PmiTable build_pmi_table(const std::vector<std::pair<Tokens, Tokens>>& corpus,
                         double smoothing) {
  if (corpus.empty()) fail(ErrorCode::invalid, "PMI table needs a non-empty corpus");
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    fail(ErrorCode::invalid, "PMI smoothing must be a finite real > 0");
  }

  PmiTable table;
  table.smoothing_ = smoothing;

  auto intern = [](std::unordered_map<std::string, uint32_t>& ids, const std::string& w) {
    return ids.try_emplace(w, static_cast<uint32_t>(ids.size())).first->second;
  };

  for (const auto& [history, response] : corpus) {
    std::set<std::string> history_types(history.begin(), history.end());
    std::set<std::string> response_types(response.begin(), response.end());
    for (const std::string& wr : response_types) {
      uint32_t rid = intern(table.response_ids_, wr);
      if (rid >= table.response_counts_.size()) table.response_counts_.resize(rid + 1, 0);
      for (const std::string& wh : history_types) {
        uint32_t hid = intern(table.history_ids_, wh);
        if (hid >= table.history_counts_.size()) table.history_counts_.resize(hid + 1, 0);
        uint64_t key = (static_cast<uint64_t>(rid) << 32) | hid;
        ++table.pair_counts_[key];
        ++table.response_counts_[rid];
        ++table.history_counts_[hid];
        table.total_ += 1.0;
      }
    }
  }
  return table;
}

double PmiTable::pmi(const std::string& response_word, const std::string& history_word) const {
  double vr = static_cast<double>(response_ids_.size());
  double vh = static_cast<double>(history_ids_.size());
  double denom = total_ + smoothing_ * vr * vh;

  double pair_count = 0.0;
  double r_count = 0.0;
  double h_count = 0.0;
  auto rit = response_ids_.find(response_word);
  auto hit = history_ids_.find(history_word);
  if (rit != response_ids_.end()) r_count = response_counts_[rit->second];
  if (hit != history_ids_.end()) h_count = history_counts_[hit->second];
  if (rit != response_ids_.end() && hit != history_ids_.end()) {
    uint64_t key = (static_cast<uint64_t>(rit->second) << 32) | hit->second;
    auto pit = pair_counts_.find(key);
    if (pit != pair_counts_.end()) pair_count = pit->second;
  }

  double joint = (pair_count + smoothing_) / denom;
  double pr = (r_count + smoothing_ * vh) / denom;
  double ph = (h_count + smoothing_ * vr) / denom;
  return std::log(joint / (pr * ph));
}

double pmi_score(const Tokens& response, const Tokens& history, const PmiTable& table) {
  if (response.empty()) fail(ErrorCode::invalid, "pmi_score of an empty response");
  if (history.empty()) fail(ErrorCode::invalid, "pmi_score with an empty history");
  double sum = 0.0;
  for (const std::string& wr : response) {
    double best = -std::numeric_limits<double>::infinity();
    for (const std::string& wh : history) {
      best = std::max(best, table.pmi(wr, wh));
    }
    sum += best;
  }
  return sum / static_cast<double>(response.size());
}

}  // namespace crk
