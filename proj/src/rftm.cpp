#include "causerank/rftm.hpp"

#include <random>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/vec.hpp"

#include "json.hpp"

namespace crk {

EventEmbedding make_embedding(std::vector<double> values) {
  EventEmbedding e;
  e.norm = norm(values);
  e.values = std::move(values);
  return e;
}

uint64_t RftmWeights::checksum() const {
  Fnv1a64 fnv;
  fnv.update_u64(dim);
  for (double x : tensor) fnv.update_f64(x);
  for (const auto& mat : role_mats) {
    for (double x : mat) fnv.update_f64(x);
  }
  return fnv.digest();
}

RftmWeights init_random_weights(size_t dim, uint64_t seed) {
  if (dim == 0) fail(ErrorCode::invalid, "weight dimension must be positive");
  RftmWeights w;
  w.dim = dim;
  std::mt19937_64 gen(seed);
  // Uniform in [0,1) from the top 53 bits; the generator's output sequence is
  // pinned by the standard, unlike std::uniform_real_distribution.
  auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  double scale = 1.0 / static_cast<double>(dim);
  auto draw = [&]() { return (2.0 * uniform() - 1.0) * scale; };

  w.tensor.resize(dim * dim * dim);
  for (double& x : w.tensor) x = draw();
  for (auto& mat : w.role_mats) {
    mat.resize(dim * dim);
    for (double& x : mat) x = draw();
  }
  return w;
}

namespace {
constexpr char kWeightsMagic[8] = {'C', 'R', 'K', 'R', 'F', 'T', 'M', '1'};
constexpr uint32_t kWeightsVersion = 1;
}  // namespace

void save_weights(const RftmWeights& weights, const std::string& path) {
  ByteWriter w;
  w.raw(kWeightsMagic, sizeof(kWeightsMagic));
  w.u32(kWeightsVersion);
  w.u32(static_cast<uint32_t>(weights.dim));
  w.u32(kRoleCount);
  for (int r = 0; r < kRoleCount; ++r) w.u32(static_cast<uint32_t>(r));
  for (double x : weights.tensor) w.f64(x);
  for (const auto& mat : weights.role_mats) {
    for (double x : mat) w.f64(x);
  }
  Fnv1a64 fnv;
  fnv.update(w.bytes().data(), w.bytes().size());
  w.u64(fnv.digest());
  write_file(path, w.bytes());
}

RftmWeights load_weights(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < sizeof(kWeightsMagic) + 8) {
    fail(ErrorCode::parse, "weight file too short: " + path);
  }
  Fnv1a64 fnv;
  fnv.update(bytes.data(), bytes.size() - 8);
  ByteReader r(bytes);
  if (std::string_view(r.raw(sizeof(kWeightsMagic))) != std::string_view(kWeightsMagic, 8)) {
    fail(ErrorCode::parse, "not a weight container (bad magic): " + path);
  }
  uint32_t version = r.u32();
  if (version != kWeightsVersion) {
    fail(ErrorCode::parse, "unsupported weight container version " + std::to_string(version) +
                               ": " + path);
  }
  RftmWeights w;
  w.dim = r.u32();
  if (w.dim == 0) fail(ErrorCode::parse, "weight container has zero dimension: " + path);
  uint32_t roles = r.u32();
  if (roles != kRoleCount) {
    fail(ErrorCode::parse, "weight container declares " + std::to_string(roles) +
                               " roles, expected " + std::to_string(kRoleCount) + ": " + path);
  }
  for (uint32_t i = 0; i < roles; ++i) {
    if (r.u32() != i) fail(ErrorCode::parse, "unexpected role order in weight container: " + path);
  }
  size_t d = w.dim;
  size_t expected = sizeof(kWeightsMagic) + 4 * (3 + roles) + 8 * (d * d * d + roles * d * d) + 8;
  if (bytes.size() != expected) {
    fail(ErrorCode::parse, "weight container has wrong size (corrupted?): " + path);
  }
  w.tensor.resize(d * d * d);
  for (double& x : w.tensor) x = r.f64();
  for (auto& mat : w.role_mats) {
    mat.resize(d * d);
    for (double& x : mat) x = r.f64();
  }
  if (r.u64() != fnv.digest()) {
    fail(ErrorCode::state, "weight container checksum mismatch (corrupted): " + path);
  }
  return w;
}

std::string weights_to_json(const RftmWeights& weights) {
  nlohmann::json j;
  j["dim"] = weights.dim;
  j["tensor_layout"] = "tensor[(k*dim + i)*dim + j] = T[k][i][j]";
  j["tensor"] = weights.tensor;
  nlohmann::json roles;
  for (int r = 0; r < kRoleCount; ++r) {
    roles[role_name(static_cast<Role>(r))] = weights.role_mats[r];
  }
  j["role_matrices"] = std::move(roles);
  return j.dump();
}

std::vector<double> tensor_apply(const RftmWeights& weights, std::span<const double> v_p,
                                 std::span<const double> v_a) {
  size_t d = weights.dim;
  if (v_p.size() != d || v_a.size() != d) {
    fail(ErrorCode::dimension, "tensor_apply: vector dimension does not match weights");
  }
  std::vector<double> out(d, 0.0);
  const double* t = weights.tensor.data();
  for (size_t k = 0; k < d; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < d; ++i) {
      const double* row = t + (k * d + i) * d;
      double inner = 0.0;
      for (size_t j = 0; j < d; ++j) inner += row[j] * v_a[j];
      acc += v_p[i] * inner;
    }
    out[k] = acc;
  }
  return out;
}

RftmEmbedder::RftmEmbedder(std::shared_ptr<const RftmWeights> weights,
                           std::shared_ptr<const VectorStore> predicate_store,
                           std::shared_ptr<const VectorStore> argument_store, OovPolicy policy)
    : weights_(std::move(weights)),
      pred_store_(std::move(predicate_store)),
      arg_store_(std::move(argument_store)),
      policy_(policy) {
  if (!weights_ || !arg_store_) {
    fail(ErrorCode::invalid, "embedder needs weights and an argument store");
  }
  if (!pred_store_) pred_store_ = arg_store_;
  if (pred_store_->dim() != weights_->dim || arg_store_->dim() != weights_->dim) {
    fail(ErrorCode::dimension, "vector store dimension does not match RFTM weights");
  }
}

const std::vector<double>& RftmEmbedder::predicate_contraction(
    const std::string& predicate, std::span<const double> v_p) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = contraction_cache_.find(predicate);
    if (it != contraction_cache_.end()) return it->second;
  }
  size_t d = weights_->dim;
  std::vector<double> m(d * d, 0.0);
  const double* t = weights_->tensor.data();
  // M[k*d + j] = sum_i T[k][i][j] * v_p[i]; inner loop streams contiguously.
  for (size_t k = 0; k < d; ++k) {
    double* mk = m.data() + k * d;
    for (size_t i = 0; i < d; ++i) {
      double s = v_p[i];
      if (s == 0.0) continue;
      const double* row = t + (k * d + i) * d;
      for (size_t j = 0; j < d; ++j) mk[j] += row[j] * s;
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return contraction_cache_.try_emplace(predicate, std::move(m)).first->second;
}

EventEmbedding RftmEmbedder::embed(const Event& event) const {
  size_t d = weights_->dim;

  auto v_p = pred_store_->lookup(event.predicate);
  std::vector<double> zero;
  if (!v_p) {
    if (policy_ == OovPolicy::zero) {
      zero.assign(d, 0.0);
      v_p = std::span<const double>(zero);
    } else {
      // No fallback exists for a missing predicate under skip either.
      fail(ErrorCode::oov, "predicate out of vocabulary: '" + event.predicate + "'");
    }
  }

  struct ResolvedArg {
    Role role;
    std::span<const double> vec;
  };
  std::vector<ResolvedArg> args;
  std::vector<std::vector<double>> zero_args;
  zero_args.reserve(event.arguments.size());  // spans into elements must stay valid
  for (const Argument& arg : event.arguments) {
    auto v_a = arg_store_->lookup(arg.lemma);
    if (v_a) {
      args.push_back({arg.role, *v_a});
      continue;
    }
    switch (policy_) {
      case OovPolicy::error:
        fail(ErrorCode::oov, "argument out of vocabulary: '" + arg.lemma + "'");
      case OovPolicy::zero:
        zero_args.emplace_back(d, 0.0);
        args.push_back({arg.role, std::span<const double>(zero_args.back())});
        break;
      case OovPolicy::skip:
        break;  // dropped; event may fall back to v_p
    }
  }

  if (args.empty()) {
    return make_embedding(std::vector<double>(v_p->begin(), v_p->end()));
  }

  const std::vector<double>& m = predicate_contraction(event.predicate, *v_p);
  std::vector<double> e(d, 0.0);
  std::vector<double> contracted(d);
  for (const ResolvedArg& arg : args) {
    // contracted[k] = T(v_p, v_a)[k]
    for (size_t k = 0; k < d; ++k) {
      const double* mk = m.data() + k * d;
      double acc = 0.0;
      for (size_t j = 0; j < d; ++j) acc += mk[j] * arg.vec[j];
      contracted[k] = acc;
    }
    const std::vector<double>& w = weights_->role_mats[static_cast<int>(arg.role)];
    for (size_t out = 0; out < d; ++out) {
      const double* row = w.data() + out * d;
      double acc = 0.0;
      for (size_t in = 0; in < d; ++in) acc += row[in] * contracted[in];
      e[out] += acc;
    }
  }
  return make_embedding(std::move(e));
}

}  // namespace crk
