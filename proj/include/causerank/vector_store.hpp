#pragma once
// Token -> dense vector store for word and predicate embeddings.
//
// Text format: one entry per line, token followed by d whitespace-separated
// decimal reals; an optional first header line "count dim" is accepted.
// Tokens are normalized with the same folding applied to event lemmas so that
// store lookups and pool/event text agree.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace crk {

enum class OovPolicy { error, zero, skip };

OovPolicy oov_policy_from_string(std::string_view name);
const char* oov_policy_name(OovPolicy policy);

class VectorStore {
 public:
  explicit VectorStore(size_t dim) : dim_(dim) {}

  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }

  // Throws Error(dimension) on length mismatch, Error(invalid) on duplicates.
  void add(std::string_view token, std::vector<double> vector);

  // Null when the token is absent. Stored data is immutable after load, so
  // the span stays valid for the store's lifetime.
  std::optional<std::span<const double>> lookup(std::string_view token) const;

  bool contains(std::string_view token) const;

  // Deterministic content checksum (token order independent).
  uint64_t checksum() const;

 private:
  size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Dimension mismatches, duplicate tokens and unparseable reals are errors
// identifying the offending line.
VectorStore load_vectors(const std::string& path, size_t expected_dim);
VectorStore parse_vectors(const std::string& content, size_t expected_dim,
                          const std::string& source_name = "<memory>");

}  // namespace crk
