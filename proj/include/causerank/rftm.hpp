#pragma once
// Role Factored Tensor Model: bilinear composition of a predicate vector with
// argument vectors followed by role-specific projections.
//
//   e = sum over arguments a of  W_role(a) * T(v_p, v_a)
//
// where T(v_p, v_a)[k] = sum_{i,j} T[k][i][j] * v_p[i] * v_a[j]. The index
// convention (output k, predicate i, argument j) is fixed here; the weight
// container depends on it. Events with no resolvable arguments embed as v_p.

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "causerank/event.hpp"
#include "causerank/vector_store.hpp"

namespace crk {

struct EventEmbedding {
  std::vector<double> values;
  double norm = 0.0;  // cached Euclidean norm of values
};

EventEmbedding make_embedding(std::vector<double> values);

struct RftmWeights {
  size_t dim = 0;
  // tensor[(k*dim + i)*dim + j] = T[k][i][j]
  std::vector<double> tensor;
  // role_mats[r][out*dim + in], one d x d matrix per role, in Role order
  std::array<std::vector<double>, kRoleCount> role_mats;

  uint64_t checksum() const;
};

// Deterministic synthetic weights: entries are uniform in (-1, 1) scaled by
// 1/dim, drawn from std::mt19937_64 so the result is bit-reproducible across
// platforms for a given (dim, seed).
RftmWeights init_random_weights(size_t dim, uint64_t seed);

// Binary container: magic "CRKRFTM1", version, dim, role count, tensor and
// role matrices as little-endian f64, trailing FNV-1a checksum.
void save_weights(const RftmWeights& weights, const std::string& path);
RftmWeights load_weights(const std::string& path);

// Debug exporter; large for real dimensions.
std::string weights_to_json(const RftmWeights& weights);

// out[k] = sum_{i,j} T[k][i][j] * v_p[i] * v_a[j]
std::vector<double> tensor_apply(const RftmWeights& weights, std::span<const double> v_p,
                                 std::span<const double> v_a);

// Embeds events against a fixed weight/store context. Logically pure: the
// internal per-predicate contraction cache only memoizes a deterministic
// function of (weights, v_p), so concurrent use is safe and reproducible.
class RftmEmbedder {
 public:
  // predicate_store may be null; the argument store then serves predicates too.
  RftmEmbedder(std::shared_ptr<const RftmWeights> weights,
               std::shared_ptr<const VectorStore> predicate_store,
               std::shared_ptr<const VectorStore> argument_store, OovPolicy policy);

  // Throws Error(oov) when the event cannot be embedded under the policy:
  // policy=error on any missing token; a missing predicate is an error under
  // policy=skip as well (there is no fallback), while policy=zero substitutes
  // a zero vector.
  EventEmbedding embed(const Event& event) const;

  size_t dim() const { return weights_->dim; }
  OovPolicy policy() const { return policy_; }
  const RftmWeights& weights() const { return *weights_; }

 private:
  // M_p[k*d + j] = sum_i T[k][i][j] * v_p[i]
  const std::vector<double>& predicate_contraction(const std::string& predicate,
                                                   std::span<const double> v_p) const;

  std::shared_ptr<const RftmWeights> weights_;
  std::shared_ptr<const VectorStore> pred_store_;
  std::shared_ptr<const VectorStore> arg_store_;
  OovPolicy policy_;

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::vector<double>> contraction_cache_;
};

}  // namespace crk
