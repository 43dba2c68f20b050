#include "cbnorm/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cbnorm {

using sdp::SdpProblem;
using sdp::Term;

namespace {

constexpr double kRankCutoff = 1e-9;  // relative numerical-rank threshold

double row_norm(const ComplexMatrix& m, std::size_t i) {
  double s = 0.0;
  for (const auto& z : m.row(i)) s += std::norm(z);
  return std::sqrt(s);
}

// Pins Z(r, c) to the complex value v; only the real part when the symbol is
// real (the imaginary part is then left to the real-data fast path).
void pin_entry(SdpProblem& p, std::size_t block, std::size_t r, std::size_t c, Complex v,
               bool real_data) {
  p.add_constraint({{block, r, c, 1.0}}, v.real());
  if (!real_data) p.add_constraint({{block, r, c, Complex{0.0, -1.0}}}, v.imag());
}

}  // namespace

double SchurFactorization::bound() const {
  double mx = 0.0, me = 0.0;
  for (std::size_t i = 0; i < xi.rows(); ++i) mx = std::max(mx, row_norm(xi, i));
  for (std::size_t j = 0; j < eta.rows(); ++j) me = std::max(me, row_norm(eta, j));
  return mx * me;
}

ComplexMatrix schur_apply(const SchurSymbol& u, const ComplexMatrix& x) {
  if (u.rows() != x.rows() || u.cols() != x.cols()) {
    std::ostringstream os;
    os << "schur_apply: symbol is " << u.rows() << "x" << u.cols() << " but matrix is "
       << x.rows() << "x" << x.cols();
    throw InputError(os.str());
  }
  return hadamard(u, x);
}

FactorizationResidual factorization_residual(const SchurSymbol& u, const SchurFactorization& f) {
  if (f.xi.rows() != u.rows() || f.eta.rows() != u.cols() || f.xi.cols() != f.eta.cols())
    throw InputError("factorization_residual: witness shape does not match symbol");
  double r = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) {
      Complex ip{};
      for (std::size_t k = 0; k < f.xi.cols(); ++k) ip += f.xi(i, k) * std::conj(f.eta(j, k));
      r = std::max(r, std::abs(u(i, j) - ip));
    }
  return {r, f.bound()};
}

namespace detail {

SchurFactorization extract_witness(const ComplexMatrix& gram, std::size_t rows) {
  const double scale = std::max(1.0, operator_norm(gram));
  // the solution already passed verification; negative eigenvalues within the
  // accepted tolerance are clipped and show up in the witness residual
  const ComplexMatrix l =
      psd_factor(gram, std::numeric_limits<double>::infinity(), kRankCutoff * scale);
  SchurFactorization f;
  f.dim = l.cols();
  f.xi = l.block(0, 0, rows, l.cols());
  f.eta = l.block(rows, 0, gram.rows() - rows, l.cols());
  return f;
}

NormReport schur_report(const SchurSymbol& u, const SdpProblem& p, const sdp::SdpSolution& s,
                        std::size_t gram_block, double norm) {
  NormReport r;
  r.norm = norm;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  r.witness = extract_witness(s.primal[gram_block], u.rows());
  r.residual = factorization_residual(u, *r.witness).residual;
  return r;
}

}  // namespace detail

NormReport schur_norm(const SchurSymbol& u, const sdp::Tolerances& tol) {
  const std::size_t ni = u.rows(), nj = u.cols();
  if (ni == 0 || nj == 0) throw InputError("schur_norm: empty symbol");
  if (!u.all_finite()) throw InputError("schur_norm: non-finite symbol");
  const std::size_t n = ni + nj;
  const bool real_data = u.is_real();

  SdpProblem p;
  const auto gram = p.add_psd_block(n);
  // slacks for diag <= t, then t itself (t >= 0 is implied by the PSD block)
  const auto lp = p.add_nonneg_block(n + 1);
  p.add_objective({lp, n, n, 1.0});
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < nj; ++j) pin_entry(p, gram, i, ni + j, u(i, j), real_data);
  for (std::size_t i = 0; i < n; ++i)
    p.add_constraint({{gram, i, i, 1.0}, {lp, i, i, 1.0}, {lp, n, n, -1.0}}, 0.0);

  const auto s = sdp::solve_or_throw(p, tol, "schur_norm");
  const double t = s.primal[lp](n, n).real();
  return detail::schur_report(u, p, s, gram, t);
}

NormReport schur_norm_block(const std::vector<std::vector<SchurSymbol>>& u,
                            const sdp::Tolerances& tol) {
  const std::size_t n = u.size();
  if (n == 0) throw InputError("schur_norm_block: empty block matrix");
  const std::size_t m = u[0].empty() ? 0 : u[0][0].rows();
  if (m == 0) throw InputError("schur_norm_block: empty symbols");
  bool real_data = true;
  for (const auto& row : u) {
    if (row.size() != n) throw InputError("schur_norm_block: block matrix is not square");
    for (const auto& s : row) {
      if (s.rows() != m || s.cols() != m)
        throw InputError("schur_norm_block: symbols do not share a common index set");
      real_data = real_data && s.is_real();
    }
  }

  // Gram coordinates: (s, i) -> s*n + i on the row side, offset by n*m on the
  // column side.
  const std::size_t half = n * m;
  SdpProblem p;
  const auto gram = p.add_psd_block(2 * half);
  std::vector<std::size_t> slack(2 * m);
  for (auto& b : slack) b = p.add_psd_block(n);
  const auto tb = p.add_nonneg_block(1);
  p.add_objective({tb, 0, 0, 1.0});

  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          pin_entry(p, gram, s * n + i, half + t * n + j, u[i][j](s, t), real_data);

  // X(s) + W(s) = t I on every diagonal n x n block of both sides.
  for (std::size_t side = 0; side < 2; ++side)
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t base = side * half + s * n;
      const std::size_t w = slack[side * m + s];
      for (std::size_t a = 0; a < n; ++a) {
        p.add_constraint({{gram, base + a, base + a, 1.0}, {w, a, a, 1.0}, {tb, 0, 0, -1.0}}, 0.0);
        for (std::size_t b = a + 1; b < n; ++b) {
          p.add_constraint({{gram, base + a, base + b, 1.0}, {w, a, b, 1.0}}, 0.0);
          if (!real_data)
            p.add_constraint({{gram, base + a, base + b, Complex{0.0, -1.0}},
                              {w, a, b, Complex{0.0, -1.0}}},
                             0.0);
        }
      }
    }

  const auto sol = sdp::solve_or_throw(p, tol, "schur_norm_block");
  NormReport r;
  r.norm = sol.primal[tb](0, 0).real();
  r.check = sdp::verify_solution(p, sol);
  r.gap = r.check.gap;
  r.status = sol.status;
  r.iterations = sol.iterations;
  return r;
}

ComplexMatrix two_sided_apply(const TensorTerms& terms, const ComplexMatrix& a) {
  if (terms.empty()) throw InputError("two_sided_apply: no terms");
  ComplexMatrix out;
  for (const auto& [v, w] : terms) {
    if (v.cols() != a.rows() || a.cols() != w.rows())
      throw InputError("two_sided_apply: dimensions do not compose");
    ComplexMatrix t = v * a * w;
    if (out.empty()) {
      out = std::move(t);
    } else {
      if (t.rows() != out.rows() || t.cols() != out.cols())
        throw InputError("two_sided_apply: terms produce different shapes");
      out += t;
    }
  }
  return out;
}

ComplexMatrix slice(const ComplexMatrix& f, const TensorTerms& terms, SliceSide side) {
  if (terms.empty()) throw InputError("slice: no terms");
  auto pair_with = [&f](const ComplexMatrix& x) {
    if (x.rows() != f.rows() || x.cols() != f.cols())
      throw InputError("slice: functional and tensor factor differ in shape");
    Complex s{};
    for (std::size_t k = 0; k < x.entries().size(); ++k) s += f.entries()[k] * x.entries()[k];
    return s;
  };
  ComplexMatrix out;
  for (const auto& [v, w] : terms) {
    const ComplexMatrix& kept = side == SliceSide::left ? w : v;
    const Complex c = pair_with(side == SliceSide::left ? v : w);
    ComplexMatrix t = kept * c;
    if (out.empty()) {
      out = std::move(t);
    } else {
      if (t.rows() != out.rows() || t.cols() != out.cols())
        throw InputError("slice: terms produce different shapes");
      out += t;
    }
  }
  return out;
}

NormReport haagerup_predual_norm(const ComplexMatrix& mu, const sdp::Tolerances& tol) {
  const std::size_t ni = mu.rows(), nj = mu.cols();
  if (ni == 0 || nj == 0) throw InputError("haagerup_predual_norm: empty input");
  const std::size_t n = ni + nj;

  // maximize Re sum mu(i,j) u(i,j) over u in the Schur ball
  SdpProblem p;
  const auto gram = p.add_psd_block(n);
  const auto lp = p.add_nonneg_block(n);
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < nj; ++j)
      if (mu(i, j) != Complex{}) p.add_objective({gram, i, ni + j, -mu(i, j)});
  for (std::size_t i = 0; i < n; ++i) p.add_constraint({{gram, i, i, 1.0}, {lp, i, i, 1.0}}, 1.0);

  const auto s = sdp::solve_or_throw(p, tol, "haagerup_predual_norm");
  NormReport r;
  r.norm = -s.primal_objective;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  r.kernel = s.primal[gram].block(0, ni, ni, nj);
  return r;
}

NormReport haagerup_predual_norm_factored(const ComplexMatrix& mu, const sdp::Tolerances& tol) {
  const std::size_t ni = mu.rows(), nj = mu.cols();
  if (ni == 0 || nj == 0) throw InputError("haagerup_predual_norm_factored: empty input");
  const std::size_t n = ni + nj;
  const bool real_data = mu.is_real();

  SdpProblem p;
  const auto z = p.add_psd_block(n);
  for (std::size_t i = 0; i < n; ++i) p.add_objective({z, i, i, 0.5});
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < nj; ++j) pin_entry(p, z, i, ni + j, mu(i, j), real_data);
  // the diagonal corners must be diagonal
  auto zero_off_diagonal = [&](std::size_t base, std::size_t size) {
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = a + 1; b < size; ++b) pin_entry(p, z, base + a, base + b, 0.0, real_data);
  };
  zero_off_diagonal(0, ni);
  zero_off_diagonal(ni, nj);

  const auto s = sdp::solve_or_throw(p, tol, "haagerup_predual_norm_factored");
  NormReport r;
  r.norm = s.primal_objective;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  return r;
}

}  // namespace cbnorm
