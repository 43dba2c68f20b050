#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbnorm/linalg.hpp"

// Reference computations that do not go through the SDP solver.
namespace cbnorm::oracle {

struct UnitarySearch {
  double value = 0.0;
  ComplexMatrix best;  // unitary attaining value
};

/// Lower bound for the Schur norm: max ||u o X|| over unitaries X, by random
/// restarts and alternating ascent. Square symbols only.
UnitarySearch unitary_search(const ComplexMatrix& u, std::uint64_t seed, int restarts = 20,
                             int iterations = 200);

/// c(k) with u(t) = sum_k c(k) exp(2 pi i k t / n).
std::vector<Complex> dft_coefficients(std::span<const Complex> u);

/// sum_k |c(k)|, the multiplier norm of u on the cyclic group of order n.
double cyclic_multiplier_norm(std::span<const Complex> u);

}  // namespace cbnorm::oracle
