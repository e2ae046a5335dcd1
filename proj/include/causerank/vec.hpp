#pragma once
// Dense vector kernels. Every similarity in the matcher flows through this
// one dot() so pruned and brute-force search see bit-identical arithmetic.

#include <span>
#include <vector>

namespace crk {

// Plain left-to-right accumulation; not reassociated by the compiler, which
// keeps results reproducible across call sites.
double dot(std::span<const double> u, std::span<const double> v);

double norm(std::span<const double> v);

// u.v / (|u||v|); returns 0 when either norm is 0. Throws Error(dimension)
// on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

// v / |v|; the zero vector normalizes to itself.
std::vector<double> normalized(std::span<const double> v);

}  // namespace crk
