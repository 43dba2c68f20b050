#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbnorm {

using Complex = std::complex<double>;

/// Raised for malformed user input: shape mismatches, non-Hermitian data,
/// group axiom violations and the like.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense complex matrix stored row-major.
///
/// A plain value type. Real inputs are promoted to complex on construction.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix constant(std::size_t rows, std::size_t cols, Complex value);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix from_real_rows(const std::vector<std::vector<double>>& rows);
  /// a b^T, i.e. entries a_i b_j (no conjugation).
  static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  /// Largest |entry|.
  double max_abs() const noexcept;
  /// Largest |A - A^*| entry; requires a square matrix.
  double hermitian_defect() const;
  bool all_finite() const noexcept;
  bool is_real(double tol = 0.0) const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Entrywise (Schur/Hadamard) product.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. Inputs whose asymmetry
/// exceeds 1e-12 relative to max|A| are rejected.
HermitianEigen hermitian_eig(const ComplexMatrix& a);

/// Eigenvalues only; same contract as hermitian_eig.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Singular values in descending order (via the spectrum of A^*A).
std::vector<double> singular_values(const ComplexMatrix& a);

/// Largest singular value; 0 for an empty or zero matrix.
double operator_norm(const ComplexMatrix& a);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& a);

/// Factor a PSD matrix as A ~ L L^*.
///
/// Eigenvalues in [-tol, 0) are clipped to zero; anything below -tol is an
/// error. Columns whose eigenvalue is <= `drop_below` are omitted, so the
/// column count of L is the retained rank (ordered by descending eigenvalue).
ComplexMatrix psd_factor(const ComplexMatrix& a, double tol, double drop_below = 0.0);

}  // namespace cbnorm
