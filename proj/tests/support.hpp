#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cbnorm/groups.hpp"
#include "cbnorm/linalg.hpp"

namespace testing {

using cbnorm::Complex;
using cbnorm::ComplexMatrix;

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20240601);
  return r;
}

inline double uniform() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng()); }

inline std::vector<Complex> complex_values(std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = {uniform(), uniform()};
  return v;
}

inline std::vector<Complex> real_values(std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = uniform();
  return v;
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, bool complex = true) {
  ComplexMatrix m(r, c);
  for (auto& z : m.entries()) z = {uniform(), complex ? uniform() : 0.0};
  return m;
}

inline double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline cbnorm::FiniteGroup quaternion() {
  return cbnorm::FiniteGroup::from_cayley_table({{0, 1, 2, 3, 4, 5, 6, 7},
                                                 {1, 2, 3, 0, 7, 4, 5, 6},
                                                 {2, 3, 0, 1, 6, 7, 4, 5},
                                                 {3, 0, 1, 2, 5, 6, 7, 4},
                                                 {4, 5, 6, 7, 2, 3, 0, 1},
                                                 {5, 6, 7, 4, 1, 2, 3, 0},
                                                 {6, 7, 4, 5, 0, 1, 2, 3},
                                                 {7, 4, 5, 6, 3, 0, 1, 2}},
                                                "quaternion");
}

inline std::vector<Complex> delta(std::size_t n, std::size_t at) {
  std::vector<Complex> v(n);
  v[at] = 1.0;
  return v;
}

}  // namespace testing
