#include "causerank/vector_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "causerank/binio.hpp"
#include "causerank/error.hpp"
#include "causerank/text.hpp"

namespace crk {

OovPolicy oov_policy_from_string(std::string_view name) {
  if (name == "error") return OovPolicy::error;
  if (name == "zero") return OovPolicy::zero;
  if (name == "skip") return OovPolicy::skip;
  fail(ErrorCode::invalid, "unknown OOV policy: '" + std::string(name) + "'");
}

const char* oov_policy_name(OovPolicy policy) {
  switch (policy) {
    case OovPolicy::error: return "error";
    case OovPolicy::zero: return "zero";
    case OovPolicy::skip: return "skip";
  }
  return "?";
}

void VectorStore::add(std::string_view token, std::vector<double> vector) {
  if (vector.size() != dim_) {
    fail(ErrorCode::dimension, "vector for '" + std::string(token) + "' has length " +
                                   std::to_string(vector.size()) + ", store dimension is " +
                                   std::to_string(dim_));
  }
  std::string key = normalize_text(token);
  if (key.empty()) fail(ErrorCode::invalid, "empty token");
  auto [it, inserted] = vectors_.try_emplace(std::move(key), std::move(vector));
  if (!inserted) {
    fail(ErrorCode::invalid, "duplicate token: '" + it->first + "'");
  }
}

std::optional<std::span<const double>> VectorStore::lookup(std::string_view token) const {
  auto it = vectors_.find(std::string(token));
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

bool VectorStore::contains(std::string_view token) const {
  return vectors_.count(std::string(token)) > 0;
}

uint64_t VectorStore::checksum() const {
  std::vector<const std::string*> keys;
  keys.reserve(vectors_.size());
  for (const auto& [token, _] : vectors_) keys.push_back(&token);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  Fnv1a64 fnv;
  fnv.update_u64(dim_);
  fnv.update_u64(vectors_.size());
  for (const std::string* key : keys) {
    fnv.update(*key);
    for (double x : vectors_.at(*key)) fnv.update_f64(x);
  }
  return fnv.digest();
}

namespace {

bool looks_like_header(const std::vector<std::string>& tokens) {
  if (tokens.size() != 2) return false;
  for (const std::string& t : tokens) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return false;
  }
  return true;
}

double parse_real(const std::string& t, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    fail(ErrorCode::parse, where + ": unparseable real '" + t + "'");
  }
  return v;
}

}  // namespace

VectorStore parse_vectors(const std::string& content, size_t expected_dim,
                          const std::string& source_name) {
  if (expected_dim == 0) fail(ErrorCode::invalid, "expected_dim must be positive");
  VectorStore store(expected_dim);

  size_t line_no = 0;
  size_t start = 0;
  bool first_data_line = true;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string line = content.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string where = source_name + ":" + std::to_string(line_no);
    std::vector<std::string> tokens = split_ws(line);
    if (first_data_line && looks_like_header(tokens)) {
      first_data_line = false;
      size_t header_dim = std::stoull(tokens[1]);
      if (header_dim != expected_dim) {
        fail(ErrorCode::dimension, where + ": header dimension " + std::to_string(header_dim) +
                                       " does not match expected " +
                                       std::to_string(expected_dim));
      }
      continue;
    }
    first_data_line = false;
    if (tokens.size() != expected_dim + 1) {
      fail(ErrorCode::dimension, where + ": expected token + " + std::to_string(expected_dim) +
                                     " values, got " + std::to_string(tokens.size() - 1) +
                                     " values");
    }
    std::vector<double> vec(expected_dim);
    for (size_t i = 0; i < expected_dim; ++i) vec[i] = parse_real(tokens[i + 1], where);
    try {
      store.add(tokens[0], std::move(vec));
    } catch (const Error& e) {
      fail(e.code(), where + ": " + e.what());
    }
  }
  return store;
}

VectorStore load_vectors(const std::string& path, size_t expected_dim) {
  return parse_vectors(read_file(path), expected_dim, path);
}

}  // namespace crk
