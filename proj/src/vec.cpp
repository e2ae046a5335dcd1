#include "causerank/vec.hpp"

#include <cmath>
#include <string>

#include "causerank/error.hpp"

namespace crk {

double dot(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    fail(ErrorCode::dimension, "cosine: dimension mismatch " + std::to_string(u.size()) +
                                   " vs " + std::to_string(v.size()));
  }
  double nu = norm(u);
  double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot(u, v) / (nu * nv);
}

std::vector<double> normalized(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  double n = norm(v);
  if (n == 0.0) return out;
  for (double& x : out) x /= n;
  return out;
}

}  // namespace crk
