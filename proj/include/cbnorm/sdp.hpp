#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbnorm/linalg.hpp"

namespace cbnorm::sdp {

enum class BlockKind { psd, nonneg };

struct Block {
  BlockKind kind;
  std::size_t size;
};

/// One term of a linear functional on the block variables: contributes
/// Re(coeff * Z_b(row, col)). For nonneg blocks row == col indexes the entry
/// and coeff must be real.
struct Term {
  std::size_t block;
  std::size_t row;
  std::size_t col;
  Complex coeff;
};

struct Constraint {
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// Handle to a free real scalar, stored as z[0] - z[1] of a 2-entry nonneg block.
struct FreeScalar {
  std::size_t block;
};

/// Standard-form conic program over complex Hermitian PSD blocks and
/// nonnegative orthants:
///
///   minimize <C, Z>  subject to  <A_k, Z> = b_k,  Z_b PSD / nonneg.
///
/// C and the A_k are assembled from Terms, so they are Hermitian by
/// construction.
class SdpProblem {
 public:
  std::size_t add_psd_block(std::size_t n);
  std::size_t add_nonneg_block(std::size_t n);
  FreeScalar add_free_scalar();

  void add_objective(const Term& t);
  void add_objective(FreeScalar v, double coeff);
  std::size_t add_constraint(std::vector<Term> terms, double rhs);

  /// Terms contributing coeff * v.
  static std::vector<Term> terms_of(FreeScalar v, double coeff);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<Term>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  /// Throws InputError on out-of-range terms or complex coefficients on
  /// nonneg blocks.
  void validate() const;

 private:
  void check_term(const Term& t) const;

  std::vector<Block> blocks_;
  std::vector<Term> objective_;
  std::vector<Constraint> constraints_;
};

struct Tolerances {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iterations = 200;
};

enum class Status { optimal, infeasible, max_iterations };

std::string to_string(Status s);

struct SdpSolution {
  /// Per block; nonneg blocks are stored as real diagonal matrices.
  std::vector<ComplexMatrix> primal;
  std::vector<ComplexMatrix> slack;
  std::vector<double> y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// (primal - dual) / (1 + |primal|)
  double gap = 0.0;
  Status status = Status::max_iterations;
  int iterations = 0;
  /// For status infeasible: "primal" (certificate in y) or "dual"
  /// (certificate in primal blocks).
  std::string infeasible_side;

  double value(FreeScalar v) const;
};

/// Residuals recomputed from the complex problem data, independent of the
/// solver's real-arithmetic internals.
struct SolutionCheck {
  double primal_residual = 0.0;  // max_k |<A_k,Z> - b_k| / (1 + max|b|)
  double dual_residual = 0.0;    // max |C - sum y_k A_k - S| / (1 + max|C|)
  double primal_min_eig = 0.0;
  double dual_min_eig = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // (primal - dual) / (1 + |primal|)

  bool within(const Tolerances& t) const;
};

SdpSolution solve(const SdpProblem& p, const Tolerances& t = {});

SolutionCheck verify_solution(const SdpProblem& p, const SdpSolution& s);

/// Thrown by norm computations when the solver does not reach optimality.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Status status)
      : std::runtime_error(what), status_(status) {}
  Status status() const noexcept { return status_; }

 private:
  Status status_;
};

/// Solve and throw SolverError unless the result is optimal.
SdpSolution solve_or_throw(const SdpProblem& p, const Tolerances& t, const char* context);

}  // namespace cbnorm::sdp
