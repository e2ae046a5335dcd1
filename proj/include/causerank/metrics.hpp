#pragma once
// Automatic evaluation battery: distinct n-gram diversity, vector extrema
// similarity, corpus BLEU, NIST, and average response length. All functions
// operate on caller-provided token sequences.

#include <span>
#include <string>
#include <vector>

#include "causerank/vector_store.hpp"

namespace crk {

using Tokens = std::vector<std::string>;

// (distinct n-grams) / (total n-grams), pooled over all responses.
// Throws Error(invalid) when no sequence contributes an n-gram.
double dist_n(const std::vector<Tokens>& responses, int n);

// Mean of dist_n over N-best lists (Ave. dist of internal candidates).
double avg_internal_dist(const std::vector<std::vector<Tokens>>& nbest_lists, int n);

// Per dimension: the max if it exceeds |min|, otherwise the min. OOV tokens
// are skipped; zero in-vocabulary tokens is an error.
std::vector<double> vector_extrema(const Tokens& sentence, const VectorStore& store);

// cosine(extrema(reference), extrema(hypothesis))
double extrema_score(const Tokens& reference, const Tokens& hypothesis,
                     const VectorStore& store);

// Corpus-level BLEU in [0, 100]: geometric mean of modified n-gram precisions
// (n = 1..max_n) times the brevity penalty min(1, e^(1 - ref_len/hyp_len)).
// Smoothing: add-one on numerator and denominator for n >= 2; a unigram
// precision of zero gives BLEU 0.
double bleu(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n = 4);

// Corpus-level NIST (n = 1..max_n). N-gram information weights come from the
// reference side: info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn)), with
// the total reference word count as the order-0 count. Matches are clipped to
// reference counts. Brevity penalty: exp(beta * ln^2(min(hyp_len/ref_len, 1)))
// with beta = ln(0.5) / ln^2(2/3), i.e. the penalty is 0.5 when the
// hypothesis is two thirds of the reference length.
double nist(const std::vector<std::pair<Tokens, Tokens>>& corpus, int max_n = 5);

double avg_length(const std::vector<Tokens>& responses);

}  // namespace crk
