#pragma once

#include <span>

#include "cbnorm/groups.hpp"
#include "cbnorm/schur.hpp"

namespace cbnorm {

/// (m0 mu)(r) = sum over s t = r of mu(s, t)
GroupFunction convolve_m0(const ComplexMatrix& mu, const FiniteGroup& g);

/// Norm of f in the standard predual, computed as
///   max Re sum_r u(r) f(r)  over u with [u(s t)] in the Schur unit ball.
/// The maximizing u is returned in `optimizer`.
NormReport q_norm(const FiniteGroup& g, std::span<const Complex> f, const sdp::Tolerances& tol = {});

/// The same norm from the tensor side: the least Haagerup norm of a mu with
/// m0(mu) = f. The minimizing mu is returned as the kernel.
NormReport q_norm_primal(const FiniteGroup& g, std::span<const Complex> f,
                         const sdp::Tolerances& tol = {});

/// sum_s u(s) f(s)
Complex pairing(std::span<const Complex> u, std::span<const Complex> f);

/// Operator norm of convolution by f on l^2(G).
double c_star_norm(const FiniteGroup& g, std::span<const Complex> f);

}  // namespace cbnorm
