#include "cbnorm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace cbnorm {

namespace {

using EigenMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> view(const ComplexMatrix& a) {
  return {a.entries().data(), static_cast<Eigen::Index>(a.rows()),
          static_cast<Eigen::Index>(a.cols())};
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw InputError(os.str());
  }
}

void require_hermitian(const ComplexMatrix& a) {
  if (!a.square()) throw InputError("hermitian_eig: matrix is not square");
  const double defect = a.hermitian_defect();
  if (defect > 1e-12 * std::max(1.0, a.max_abs())) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max asymmetry " << defect;
    throw InputError(os.str());
  }
}

// Hermitian part, so the eigensolver only ever sees exact Hermitian data.
Eigen::MatrixXcd hermitian_part(const ComplexMatrix& a) {
  Eigen::MatrixXcd m = view(a);
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InputError("ComplexMatrix: entry count does not match shape");
  }
  if (!all_finite()) throw InputError("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::constant(std::size_t rows, std::size_t cols, Complex value) {
  return {rows, cols, std::vector<Complex>(rows * cols, value)};
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> e;
  e.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InputError("from_rows: ragged rows");
    e.insert(e.end(), row.begin(), row.end());
  }
  return {r, c, std::move(e)};
}

ComplexMatrix ComplexMatrix::from_real_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<Complex> e;
  e.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InputError("from_real_rows: ragged rows");
    for (double v : row) e.emplace_back(v, 0.0);
  }
  return {r, c, std::move(e)};
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& z : m.entries_) z = std::conj(z);
  return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block: out of range");
  ComplexMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InputError("set_block: out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermitian_defect() const {
  if (!square()) throw InputError("hermitian_defect: matrix is not square");
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool ComplexMatrix::is_real(double tol) const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [tol](const Complex& z) { return std::abs(z.imag()) <= tol; });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("operator*: inner dimensions differ");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard");
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.entries().size(); ++k) m.entries()[k] = a.entries()[k] * b.entries()[k];
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

HermitianEigen hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a);
  HermitianEigen out;
  const std::size_t n = a.rows();
  out.vectors = ComplexMatrix(n, n);
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(a));
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.vectors(i, j) = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_hermitian(a);
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + a.rows()};
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(view(a));
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double operator_norm(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double trace_norm(const ComplexMatrix& a) {
  double t = 0.0;
  for (double s : singular_values(a)) t += s;
  return t;
}

ComplexMatrix psd_factor(const ComplexMatrix& a, double tol, double drop_below) {
  const auto eig = hermitian_eig(a);
  const std::size_t n = a.rows();
  if (n > 0 && eig.values.front() < -tol) {
    std::ostringstream os;
    os << "not PSD: eigenvalue " << eig.values.front() << " below -" << tol;
    throw InputError(os.str());
  }
  std::vector<std::size_t> keep;
  for (std::size_t k = n; k-- > 0;) {
    if (eig.values[k] > drop_below && eig.values[k] > 0.0) keep.push_back(k);
  }
  ComplexMatrix l(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double s = std::sqrt(eig.values[keep[c]]);
    for (std::size_t i = 0; i < n; ++i) l(i, c) = eig.vectors(i, keep[c]) * s;
  }
  return l;
}

}  // namespace cbnorm
