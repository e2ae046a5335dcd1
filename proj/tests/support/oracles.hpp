#pragma once
// Independent reference implementations used as test oracles. These are
// deliberately written with different data structures and loop orders than
// the library so agreement is meaningful; none of them share code with the
// implementation under test.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causerank/event.hpp"
#include "causerank/match.hpp"
#include "causerank/metrics.hpp"
#include "causerank/pool.hpp"
#include "causerank/rftm.hpp"

namespace crk::test {

double oracle_cosine(const std::vector<double>& u, const std::vector<double>& v);

// Triple loop in (j, i, k) order, the reverse of the library's traversal.
std::vector<double> oracle_tensor_apply(const RftmWeights& weights,
                                        const std::vector<double>& v_p,
                                        const std::vector<double>& v_a);

struct OracleMatch {
  bool matched = false;
  uint32_t entry = 0;
  bool inverse = false;
  double effective_lift = 0.0;
};

// Full scan of the pool with freshly computed (unnormalized) embeddings and
// the oracle cosine; mirrors the matching semantics from first principles.
OracleMatch oracle_lift_emb(const Event& history_event, const Event& response_event,
                            const CausalityPool& pool, const RftmEmbedder& embedder,
                            double threshold, bool allow_inverse, double default_lift,
                            double min_effective_lift);

double oracle_dist_n(const std::vector<Tokens>& responses, int n);

double oracle_bleu(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n);

double oracle_nist(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n);

std::vector<double> oracle_extrema(const Tokens& sentence,
                                   const std::vector<std::pair<std::string, std::vector<double>>>& vocab);

// Literal evaluation of the documented smoothed PMI estimator.
class OraclePmi {
 public:
  OraclePmi(const std::vector<std::pair<Tokens, Tokens>>& corpus, double smoothing);
  double pmi(const std::string& wr, const std::string& wh) const;
  double score(const Tokens& response, const Tokens& history) const;

 private:
  std::map<std::pair<std::string, std::string>, double> counts_;
  std::map<std::string, double> r_counts_, h_counts_;
  double total_ = 0.0;
  double smoothing_;
};

// Eq-style scoring recomputed directly.
double oracle_score(double log_prob_natural, double effective_lift, double lambda);

}  // namespace crk::test
