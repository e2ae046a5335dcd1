#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>

namespace crk::test {

std::vector<double> random_vector(Rng& rng, size_t dim, double lo, double hi) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

std::vector<double> random_unit_vector(Rng& rng, size_t dim) {
  std::vector<double> v = random_vector(rng, dim);
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= n;
  return v;
}

std::shared_ptr<VectorStore> random_store(Rng& rng, size_t dim, size_t n_tokens,
                                          const std::string& prefix) {
  auto store = std::make_shared<VectorStore>(dim);
  for (size_t i = 0; i < n_tokens; ++i) {
    store->add(prefix + std::to_string(i), random_vector(rng, dim));
  }
  return store;
}

Event random_event(Rng& rng, size_t n_tokens, int max_args, const std::string& prefix) {
  auto token = [&] { return prefix + std::to_string(rng.range(0, n_tokens - 1)); };
  std::vector<std::pair<Role, std::string>> args;
  int n_args = static_cast<int>(rng.range(0, max_args));
  std::vector<int> roles = {0, 1, 2, 3, 4};
  for (int a = 0; a < n_args && !roles.empty(); ++a) {
    size_t pick = static_cast<size_t>(rng.range(0, static_cast<int64_t>(roles.size()) - 1));
    args.emplace_back(static_cast<Role>(roles[pick]), token());
    roles.erase(roles.begin() + static_cast<ptrdiff_t>(pick));
  }
  return make_event(token(), std::move(args));
}

std::shared_ptr<CausalityPool> random_pool(Rng& rng, size_t n, size_t n_tokens, int max_args,
                                           double lift_lo, double lift_hi,
                                           const std::string& prefix) {
  std::vector<CausalityPair> pairs;
  pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    CausalityPair p;
    p.cause = random_event(rng, n_tokens, max_args, prefix);
    p.effect = random_event(rng, n_tokens, max_args, prefix);
    p.lift = rng.uniform(lift_lo, lift_hi);
    pairs.push_back(std::move(p));
  }
  return std::make_shared<CausalityPool>(make_pool(std::move(pairs)));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<uint64_t> counter{0};
  auto base = std::filesystem::temp_directory_path();
  dir_ = base / ("causerank_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(dir_, ec);
}

}  // namespace crk::test
