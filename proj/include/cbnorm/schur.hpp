#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbnorm/linalg.hpp"
#include "cbnorm/sdp.hpp"

namespace cbnorm {

/// A function u(i, j) on I x J, acting on matrices by entrywise product.
using SchurSymbol = ComplexMatrix;

/// Vector families with u(i, j) = <xi(i), eta(j)> = sum_k xi(i)_k conj(eta(j)_k).
struct SchurFactorization {
  std::size_t dim = 0;
  ComplexMatrix xi;   // |I| x dim
  ComplexMatrix eta;  // |J| x dim

  /// max_i |xi(i)| * max_j |eta(j)|
  double bound() const;
};

/// Result of a norm computation together with everything needed to certify it.
struct NormReport {
  double norm = 0.0;
  /// Relative duality gap, recomputed from the returned solution.
  double gap = 0.0;
  /// Witness residual; zero when no witness is attached.
  double residual = 0.0;
  std::optional<SchurFactorization> witness;
  /// Optimal kernel / symbol when the program has one (a_norm, q_norm).
  std::optional<ComplexMatrix> kernel;
  std::vector<Complex> optimizer;
  sdp::SolutionCheck check;
  sdp::Status status = sdp::Status::optimal;
  int iterations = 0;
  /// True when the value only bounds the quantity of interest from below.
  bool lower_bound = false;
  std::string note;
};

ComplexMatrix schur_apply(const SchurSymbol& u, const ComplexMatrix& x);

/// Schur multiplier norm as the optimal t of
///   min t  s.t.  [[X, u], [u^*, Y]] PSD,  diag(X) <= t,  diag(Y) <= t,
/// with a factorization witness read off the optimal Gram matrix.
NormReport schur_norm(const SchurSymbol& u, const sdp::Tolerances& tol = {});

/// Norm of an n x n matrix [u_ij] of Schur multipliers on a common I x I
/// (the matrix-level factorization norm).
NormReport schur_norm_block(const std::vector<std::vector<SchurSymbol>>& u,
                            const sdp::Tolerances& tol = {});

struct FactorizationResidual {
  double residual;  // max |u(i,j) - <xi(i), eta(j)>|
  double bound;     // max |xi| * max |eta|
};

FactorizationResidual factorization_residual(const SchurSymbol& u, const SchurFactorization& f);

/// A finite sum sum_k v_k (x) w_k of elementary tensors.
using TensorTerms = std::vector<std::pair<ComplexMatrix, ComplexMatrix>>;

/// a |-> sum_k v_k a w_k
ComplexMatrix two_sided_apply(const TensorTerms& terms, const ComplexMatrix& a);

enum class SliceSide { left, right };

/// Slice maps with F acting through the trace pairing F(v) = tr(F^T v):
/// left gives sum F(v_k) w_k, right gives sum F(w_k) v_k.
ComplexMatrix slice(const ComplexMatrix& f, const TensorTerms& terms, SliceSide side);

/// Norm of mu as a functional on the Schur multipliers under the bilinear
/// pairing sum u(i,j) mu(i,j): the sup of Re<u, mu> over the Schur ball.
/// The optimal symbol is returned in `kernel`.
NormReport haagerup_predual_norm(const ComplexMatrix& mu, const sdp::Tolerances& tol = {});

/// The same norm from the factored side:
///   min (sum a + sum b) / 2  s.t.  [[diag a, mu], [mu^*, diag b]] PSD.
NormReport haagerup_predual_norm_factored(const ComplexMatrix& mu, const sdp::Tolerances& tol = {});

namespace detail {

/// Reads a factorization from the Gram matrix of an optimal Schur program
/// (first `rows` coordinates give xi, the rest give eta).
SchurFactorization extract_witness(const ComplexMatrix& gram, std::size_t rows);

/// Shared by schur_norm and the group-side programs: fills a NormReport from
/// a Schur-program solution on symbol u.
NormReport schur_report(const SchurSymbol& u, const sdp::SdpProblem& p, const sdp::SdpSolution& s,
                        std::size_t gram_block, double norm);

}  // namespace detail

}  // namespace cbnorm
