#pragma once
// Deterministic fixture generators shared by the unit and acceptance suites.

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "causerank/event.hpp"
#include "causerank/pool.hpp"
#include "causerank/rftm.hpp"
#include "causerank/vector_store.hpp"

namespace crk::test {

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [lo, hi]
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(gen_() % static_cast<uint64_t>(hi - lo + 1));
  }
  std::mt19937_64& gen() { return gen_; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(range(0, static_cast<int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

std::vector<double> random_vector(Rng& rng, size_t dim, double lo = -1.0, double hi = 1.0);
std::vector<double> random_unit_vector(Rng& rng, size_t dim);

// Store over tokens "w0".."w{n-1}" with random vectors.
std::shared_ptr<VectorStore> random_store(Rng& rng, size_t dim, size_t n_tokens,
                                          const std::string& prefix = "w");

// Random event over the store's token set: predicate "prefix{i}" plus up to
// max_args arguments with distinct roles.
Event random_event(Rng& rng, size_t n_tokens, int max_args, const std::string& prefix = "w");

// Pool of n random pairs with lifts uniform in (lift_lo, lift_hi).
std::shared_ptr<CausalityPool> random_pool(Rng& rng, size_t n, size_t n_tokens, int max_args,
                                           double lift_lo = 2.0, double lift_hi = 100.0,
                                           const std::string& prefix = "w");

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace crk::test
