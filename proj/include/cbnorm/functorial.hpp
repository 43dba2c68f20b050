#pragma once

#include <span>
#include <string>

#include "cbnorm/harmonic.hpp"

namespace cbnorm {

/// (j_sigma u)(s) = u(sigma(s)); u lives on sigma's target.
GroupFunction pullback(std::span<const Complex> u, const GroupHomomorphism& sigma);

/// Values of u on the subgroup, in the subgroup's labelling.
GroupFunction restrict(std::span<const Complex> u, const Subgroup& h);

/// u on h, zero elsewhere in the ambient group.
GroupFunction extend_zero(std::span<const Complex> u, const Subgroup& h);

/// u composed with the quotient projection.
GroupFunction lift_from_quotient(std::span<const Complex> u, const Quotient& q);

/// Outcome of comparing the multiplier norms on both sides of a map.
struct NormComparison {
  /// "equal" or "nonincreasing"
  std::string relation;
  NormReport source;
  NormReport image;
  double tolerance = 0.0;
  bool holds = false;
};

/// Isometry for surjective sigma: cb(u o sigma) = cb(u).
NormComparison verify_pullback(std::span<const Complex> u, const GroupHomomorphism& sigma,
                               double tolerance = 1e-4, const sdp::Tolerances& tol = {});
/// Contraction: cb(u|H) <= cb(u).
NormComparison verify_restrict(std::span<const Complex> u, const Subgroup& h, double tolerance = 1e-5,
                               const sdp::Tolerances& tol = {});
/// Isometry: cb(extension by zero) = cb(u).
NormComparison verify_extend(std::span<const Complex> u, const Subgroup& h, double tolerance = 1e-4,
                             const sdp::Tolerances& tol = {});
/// Isometry: cb(u o q) = cb(u).
NormComparison verify_lift(std::span<const Complex> u, const Quotient& q, double tolerance = 1e-4,
                           const sdp::Tolerances& tol = {});

}  // namespace cbnorm
