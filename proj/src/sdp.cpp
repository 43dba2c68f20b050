#include "cbnorm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

namespace cbnorm::sdp {

// ---------------------------------------------------------------------------
// problem assembly
// ---------------------------------------------------------------------------

std::size_t SdpProblem::add_psd_block(std::size_t n) {
  if (n == 0) throw InputError("add_psd_block: empty block");
  blocks_.push_back({BlockKind::psd, n});
  return blocks_.size() - 1;
}

std::size_t SdpProblem::add_nonneg_block(std::size_t n) {
  if (n == 0) throw InputError("add_nonneg_block: empty block");
  blocks_.push_back({BlockKind::nonneg, n});
  return blocks_.size() - 1;
}

FreeScalar SdpProblem::add_free_scalar() { return {add_nonneg_block(2)}; }

std::vector<Term> SdpProblem::terms_of(FreeScalar v, double coeff) {
  return {{v.block, 0, 0, coeff}, {v.block, 1, 1, -coeff}};
}

void SdpProblem::check_term(const Term& t) const {
  if (t.block >= blocks_.size()) throw InputError("term refers to an unknown block");
  const Block& b = blocks_[t.block];
  if (t.row >= b.size || t.col >= b.size) throw InputError("term index outside its block");
  if (b.kind == BlockKind::nonneg) {
    if (t.row != t.col) throw InputError("nonneg block terms must be diagonal");
    if (t.coeff.imag() != 0.0) throw InputError("nonneg block terms must be real");
  }
  if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
    throw InputError("non-finite coefficient");
}

void SdpProblem::add_objective(const Term& t) {
  check_term(t);
  objective_.push_back(t);
}

void SdpProblem::add_objective(FreeScalar v, double coeff) {
  for (const auto& t : terms_of(v, coeff)) add_objective(t);
}

std::size_t SdpProblem::add_constraint(std::vector<Term> terms, double rhs) {
  for (const auto& t : terms) check_term(t);
  if (!std::isfinite(rhs)) throw InputError("non-finite right-hand side");
  constraints_.push_back({std::move(terms), rhs});
  return constraints_.size() - 1;
}

void SdpProblem::validate() const {
  std::size_t dim = 0;
  for (const auto& b : blocks_) dim += b.kind == BlockKind::psd ? b.size * b.size : b.size;
  if (constraints_.size() > dim) {
    std::ostringstream os;
    os << "problem has " << constraints_.size() << " constraints but only " << dim
       << " real degrees of freedom";
    throw InputError(os.str());
  }
  for (const auto& t : objective_) check_term(t);
  for (const auto& c : constraints_)
    for (const auto& t : c.terms) check_term(t);
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::max_iterations: return "max_iterations";
  }
  return "unknown";
}

double SdpSolution::value(FreeScalar v) const {
  const auto& z = primal.at(v.block);
  return z(0, 0).real() - z(1, 1).real();
}

bool SolutionCheck::within(const Tolerances& t) const {
  return std::abs(gap) <= t.gap_tol && primal_residual <= t.feas_tol &&
         dual_residual <= t.feas_tol && primal_min_eig >= -t.feas_tol &&
         dual_min_eig >= -t.feas_tol;
}

// ---------------------------------------------------------------------------
// verification, computed directly on the complex data
// ---------------------------------------------------------------------------

namespace {

double apply_terms(const std::vector<Term>& terms, const std::vector<ComplexMatrix>& z) {
  double v = 0.0;
  for (const auto& t : terms) v += (t.coeff * z[t.block](t.row, t.col)).real();
  return v;
}

// Adds scale * A into per-block dense Hermitian matrices, where A is the
// Hermitian representer of the functional given by `terms`.
void accumulate_hermitian(const std::vector<Term>& terms, double scale,
                          std::vector<ComplexMatrix>& out) {
  for (const auto& t : terms) {
    auto& m = out[t.block];
    if (t.row == t.col) {
      m(t.row, t.row) += scale * t.coeff.real();
    } else {
      m(t.row, t.col) += scale * std::conj(t.coeff) * 0.5;
      m(t.col, t.row) += scale * t.coeff * 0.5;
    }
  }
}

double min_eig(const SdpProblem& p, const std::vector<ComplexMatrix>& blocks) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    if (p.blocks()[b].kind == BlockKind::nonneg) {
      for (std::size_t i = 0; i < p.blocks()[b].size; ++i) m = std::min(m, blocks[b](i, i).real());
    } else {
      const auto ev = hermitian_eigenvalues(blocks[b]);
      m = std::min(m, ev.front());
    }
  }
  return std::isfinite(m) ? m : 0.0;
}

}  // namespace

SolutionCheck verify_solution(const SdpProblem& p, const SdpSolution& s) {
  SolutionCheck c;
  const auto& blocks = p.blocks();
  if (s.primal.size() != blocks.size() || s.slack.size() != blocks.size() ||
      s.y.size() != p.constraints().size())
    throw InputError("verify_solution: solution does not match problem shape");

  double bmax = 0.0;
  for (std::size_t k = 0; k < p.constraints().size(); ++k) {
    const auto& con = p.constraints()[k];
    bmax = std::max(bmax, std::abs(con.rhs));
    c.primal_residual =
        std::max(c.primal_residual, std::abs(apply_terms(con.terms, s.primal) - con.rhs));
  }
  c.primal_residual /= 1.0 + bmax;

  std::vector<ComplexMatrix> cmat, resid;
  for (const auto& b : blocks) {
    cmat.emplace_back(b.size, b.size);
  }
  accumulate_hermitian(p.objective(), 1.0, cmat);
  double cmax = 0.0;
  for (const auto& m : cmat) cmax = std::max(cmax, m.max_abs());
  resid = cmat;
  for (std::size_t k = 0; k < p.constraints().size(); ++k)
    accumulate_hermitian(p.constraints()[k].terms, -s.y[k], resid);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    resid[b] -= s.slack[b];
    if (blocks[b].kind == BlockKind::nonneg) {
      // only the diagonal is meaningful for an orthant
      for (std::size_t i = 0; i < blocks[b].size; ++i)
        c.dual_residual = std::max(c.dual_residual, std::abs(resid[b](i, i)));
    } else {
      c.dual_residual = std::max(c.dual_residual, resid[b].max_abs());
    }
  }
  c.dual_residual /= 1.0 + cmax;

  c.primal_min_eig = min_eig(p, s.primal);
  c.dual_min_eig = min_eig(p, s.slack);
  c.primal_objective = apply_terms(p.objective(), s.primal);
  c.dual_objective = 0.0;
  for (std::size_t k = 0; k < p.constraints().size(); ++k)
    c.dual_objective += p.constraints()[k].rhs * s.y[k];
  c.gap = (c.primal_objective - c.dual_objective) / (1.0 + std::abs(c.primal_objective));
  return c;
}

// ---------------------------------------------------------------------------
// real-arithmetic core
// ---------------------------------------------------------------------------

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Entry {
  int row;
  int col;
  double value;
};

// One cone block of the real problem. Complex Hermitian blocks are either
// carried as real symmetric matrices (when all their data is real) or
// through the embedding Z -> [[Re Z, -Im Z], [Im Z, Re Z]].
struct RealBlock {
  bool lp = false;
  bool embedded = false;
  int n = 0;          // real dimension
  int original = 0;   // complex dimension
  MatrixXd c;         // psd objective
  VectorXd c_lp;      // lp objective
  std::vector<std::vector<Entry>> a;  // oriented entries per constraint
  std::vector<int> touching;          // constraints with entries here
};

struct RealProblem {
  std::vector<RealBlock> blocks;
  VectorXd b;
  std::size_t m = 0;
};

struct Iterate {
  std::vector<MatrixXd> x, s;  // psd blocks (lp blocks use the _lp vectors)
  std::vector<VectorXd> x_lp, s_lp;
  VectorXd y;
};

void merge_entries(std::vector<Entry>& e) {
  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> out;
  for (const auto& x : e) {
    if (!out.empty() && out.back().row == x.row && out.back().col == x.col) {
      out.back().value += x.value;
    } else {
      out.push_back(x);
    }
  }
  std::erase_if(out, [](const Entry& x) { return x.value == 0.0; });
  e = std::move(out);
}

// Emits the oriented real entries for Hermitian entry A(r,c) = v, r <= c.
void emit(const RealBlock& blk, int r, int c, Complex v, std::vector<Entry>& out) {
  auto sym = [&out](int p, int q, double val) {
    if (val == 0.0) return;
    out.push_back({p, q, val});
    if (p != q) out.push_back({q, p, val});
  };
  if (!blk.embedded) {
    sym(r, c, v.real());
    return;
  }
  const int n = blk.original;
  if (r == c) {
    sym(r, r, 0.5 * v.real());
    sym(n + r, n + r, 0.5 * v.real());
  } else {
    sym(r, c, 0.5 * v.real());
    sym(n + r, n + c, 0.5 * v.real());
    sym(r, n + c, -0.5 * v.imag());
    sym(c, n + r, 0.5 * v.imag());
  }
}

// Hermitian-upper representation of a term: returns (r, c, A_rc) with r <= c.
std::tuple<int, int, Complex> hermitian_upper(const Term& t) {
  const int i = static_cast<int>(t.row), j = static_cast<int>(t.col);
  if (i == j) return {i, i, Complex{t.coeff.real(), 0.0}};
  if (i < j) return {i, j, std::conj(t.coeff) * 0.5};
  return {j, i, t.coeff * 0.5};
}

RealProblem build_real(const SdpProblem& p) {
  RealProblem rp;
  rp.m = p.constraints().size();
  const auto& blocks = p.blocks();

  std::vector<bool> complex_data(blocks.size(), false);
  auto mark = [&](const Term& t) {
    if (t.coeff.imag() != 0.0 && t.row != t.col) complex_data[t.block] = true;
  };
  for (const auto& t : p.objective()) mark(t);
  for (const auto& c : p.constraints())
    for (const auto& t : c.terms) mark(t);

  rp.blocks.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& blk = rp.blocks[b];
    blk.lp = blocks[b].kind == BlockKind::nonneg;
    blk.original = static_cast<int>(blocks[b].size);
    blk.embedded = !blk.lp && complex_data[b];
    blk.n = blk.embedded ? 2 * blk.original : blk.original;
    if (blk.lp) {
      blk.c_lp = VectorXd::Zero(blk.n);
    } else {
      blk.c = MatrixXd::Zero(blk.n, blk.n);
    }
    blk.a.resize(rp.m);
  }

  for (const auto& t : p.objective()) {
    auto& blk = rp.blocks[t.block];
    if (blk.lp) {
      blk.c_lp(static_cast<int>(t.row)) += t.coeff.real();
      continue;
    }
    std::vector<Entry> e;
    const auto [r, c, v] = hermitian_upper(t);
    emit(blk, r, c, v, e);
    for (const auto& x : e) blk.c(x.row, x.col) += x.value;
  }

  rp.b.resize(static_cast<Eigen::Index>(rp.m));
  for (std::size_t k = 0; k < rp.m; ++k) {
    const auto& con = p.constraints()[k];
    rp.b(static_cast<Eigen::Index>(k)) = con.rhs;
    for (const auto& t : con.terms) {
      auto& blk = rp.blocks[t.block];
      if (blk.lp) {
        const int i = static_cast<int>(t.row);
        blk.a[k].push_back({i, i, t.coeff.real()});
      } else {
        const auto [r, c, v] = hermitian_upper(t);
        emit(blk, r, c, v, blk.a[k]);
      }
    }
  }
  for (auto& blk : rp.blocks) {
    for (std::size_t k = 0; k < rp.m; ++k) {
      merge_entries(blk.a[k]);
      if (!blk.a[k].empty()) blk.touching.push_back(static_cast<int>(k));
    }
  }
  return rp;
}

double frob(const std::vector<Entry>& e) {
  double s = 0.0;
  for (const auto& x : e) s += x.value * x.value;
  return std::sqrt(s);
}

// <A_k, G> for every constraint touching the block, accumulated into out.
void apply_a(const RealBlock& blk, const MatrixXd& g, VectorXd& out) {
  for (int k : blk.touching) {
    double v = 0.0;
    for (const auto& x : blk.a[static_cast<std::size_t>(k)]) v += x.value * g(x.row, x.col);
    out(k) += v;
  }
}

void apply_a_lp(const RealBlock& blk, const VectorXd& g, VectorXd& out) {
  for (int k : blk.touching) {
    double v = 0.0;
    for (const auto& x : blk.a[static_cast<std::size_t>(k)]) v += x.value * g(x.row);
    out(k) += v;
  }
}

MatrixXd apply_at(const RealBlock& blk, const VectorXd& y) {
  MatrixXd m = MatrixXd::Zero(blk.n, blk.n);
  for (int k : blk.touching)
    for (const auto& x : blk.a[static_cast<std::size_t>(k)]) m(x.row, x.col) += y(k) * x.value;
  return m;
}

VectorXd apply_at_lp(const RealBlock& blk, const VectorXd& y) {
  VectorXd v = VectorXd::Zero(blk.n);
  for (int k : blk.touching)
    for (const auto& x : blk.a[static_cast<std::size_t>(k)]) v(x.row) += y(k) * x.value;
  return v;
}

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with X + alpha*dX PSD (infinity if unbounded).
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd t = llt.matrixL().solve(dx);
  MatrixXd b = llt.matrixL().solve(t.transpose());
  b = sym(b);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

struct Direction {
  VectorXd dy;
  std::vector<MatrixXd> dx, ds;
  std::vector<VectorXd> dx_lp, ds_lp;
};

class Solver {
 public:
  Solver(RealProblem rp, const Tolerances& tol) : rp_(std::move(rp)), tol_(tol) {}

  // Returns status; the final iterate is left in it_.
  Status run(int& iterations, std::string& infeasible_side,
             const std::function<bool(const Iterate&)>& accept) {
    initialize();
    const std::size_t nb = rp_.blocks.size();
    int stalls = 0;
    for (iterations = 0; iterations < tol_.max_iterations; ++iterations) {
      residuals();
      const double pobj = primal_objective();
      const double dobj = rp_.b.dot(it_.y);
      const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
      const double pinf = rp_.m ? rp_p_.lpNorm<Eigen::Infinity>() / (1.0 + bmax_) : 0.0;
      const double dinf = dual_residual_norm() / (1.0 + cmax_);
      if (relgap <= tol_.gap_tol && pinf <= tol_.feas_tol && dinf <= tol_.feas_tol && accept(it_)) {
        return Status::optimal;
      }
      if (dobj > 1e10 && dinf <= 1e-6) {
        infeasible_side = "primal";
        return Status::infeasible;
      }
      if (pobj < -1e10 && pinf <= 1e-6) {
        infeasible_side = "dual";
        return Status::infeasible;
      }

      if (!factor_schur()) break;
      const double mu = complementarity() / static_cast<double>(total_dim_);

      // predictor
      Direction pred = direction(0.0, mu, nullptr);
      const double ap = std::min(1.0, primal_step(pred));
      const double ad = std::min(1.0, dual_step(pred));
      const double mu_aff = trial_complementarity(pred, ap, ad) / static_cast<double>(total_dim_);
      double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
      sigma = std::clamp(sigma, 0.0, 1.0);

      // corrector
      Direction dir = direction(sigma, mu, &pred);
      const double alpha_p = std::min(1.0, kStepFraction * primal_step(dir));
      const double alpha_d = std::min(1.0, kStepFraction * dual_step(dir));

      for (std::size_t b = 0; b < nb; ++b) {
        if (rp_.blocks[b].lp) {
          it_.x_lp[b] += alpha_p * dir.dx_lp[b];
          it_.s_lp[b] += alpha_d * dir.ds_lp[b];
        } else {
          it_.x[b] += alpha_p * dir.dx[b];
          it_.s[b] += alpha_d * dir.ds[b];
          it_.x[b] = sym(it_.x[b]);
          it_.s[b] = sym(it_.s[b]);
        }
      }
      it_.y += alpha_d * dir.dy;

      stalls = std::max(alpha_p, alpha_d) < 1e-8 ? stalls + 1 : 0;
      if (stalls >= 3) break;
    }
    return Status::max_iterations;
  }

  const Iterate& iterate() const { return it_; }

 private:
  static constexpr double kStepFraction = 0.98;

  void initialize() {
    const std::size_t nb = rp_.blocks.size();
    it_.x.assign(nb, {});
    it_.s.assign(nb, {});
    it_.x_lp.assign(nb, {});
    it_.s_lp.assign(nb, {});
    it_.y = VectorXd::Zero(static_cast<Eigen::Index>(rp_.m));
    total_dim_ = 0;
    bmax_ = rp_.m ? rp_.b.lpNorm<Eigen::Infinity>() : 0.0;
    cmax_ = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& blk = rp_.blocks[b];
      total_dim_ += static_cast<std::size_t>(blk.n);
      const double n = blk.n;
      double ratio = 0.0, amax = 0.0;
      for (int k : blk.touching) {
        const double na = frob(blk.a[static_cast<std::size_t>(k)]);
        ratio = std::max(ratio, (1.0 + std::abs(rp_.b(k))) / (1.0 + na));
        amax = std::max(amax, na);
      }
      const double cnorm = blk.lp ? blk.c_lp.norm() : blk.c.norm();
      cmax_ = std::max(cmax_, blk.lp ? blk.c_lp.lpNorm<Eigen::Infinity>()
                                     : blk.c.lpNorm<Eigen::Infinity>());
      const double xi = std::max({10.0, std::sqrt(n), n * ratio});
      const double eta = std::max({10.0, std::sqrt(n), amax, 1.0 + cnorm});
      if (blk.lp) {
        it_.x_lp[b] = VectorXd::Constant(blk.n, xi);
        it_.s_lp[b] = VectorXd::Constant(blk.n, eta);
      } else {
        it_.x[b] = xi * MatrixXd::Identity(blk.n, blk.n);
        it_.s[b] = eta * MatrixXd::Identity(blk.n, blk.n);
      }
    }
  }

  void residuals() {
    const std::size_t nb = rp_.blocks.size();
    VectorXd ax = VectorXd::Zero(static_cast<Eigen::Index>(rp_.m));
    rd_.assign(nb, {});
    rd_lp_.assign(nb, {});
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& blk = rp_.blocks[b];
      if (blk.lp) {
        apply_a_lp(blk, it_.x_lp[b], ax);
        rd_lp_[b] = blk.c_lp - apply_at_lp(blk, it_.y) - it_.s_lp[b];
      } else {
        apply_a(blk, it_.x[b], ax);
        rd_[b] = blk.c - apply_at(blk, it_.y) - it_.s[b];
      }
    }
    rp_p_ = rp_.b - ax;
  }

  double dual_residual_norm() const {
    double m = 0.0;
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b) {
      m = std::max(m, rp_.blocks[b].lp ? rd_lp_[b].lpNorm<Eigen::Infinity>()
                                       : rd_[b].lpNorm<Eigen::Infinity>());
    }
    return m;
  }

  double primal_objective() const {
    double v = 0.0;
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b) {
      const auto& blk = rp_.blocks[b];
      v += blk.lp ? blk.c_lp.dot(it_.x_lp[b]) : (blk.c.array() * it_.x[b].array()).sum();
    }
    return v;
  }

  double complementarity() const {
    double v = 0.0;
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b) {
      v += rp_.blocks[b].lp ? it_.x_lp[b].dot(it_.s_lp[b])
                            : (it_.x[b].array() * it_.s[b].array()).sum();
    }
    return v;
  }

  double trial_complementarity(const Direction& d, double ap, double ad) const {
    double v = 0.0;
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b) {
      if (rp_.blocks[b].lp) {
        v += (it_.x_lp[b] + ap * d.dx_lp[b]).dot(it_.s_lp[b] + ad * d.ds_lp[b]);
      } else {
        v += ((it_.x[b] + ap * d.dx[b]).array() * (it_.s[b] + ad * d.ds[b]).array()).sum();
      }
    }
    return v;
  }

  double primal_step(const Direction& d) const {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b)
      a = std::min(a, rp_.blocks[b].lp ? max_step_lp(it_.x_lp[b], d.dx_lp[b])
                                       : max_step(it_.x[b], d.dx[b]));
    return a;
  }

  double dual_step(const Direction& d) const {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < rp_.blocks.size(); ++b)
      a = std::min(a, rp_.blocks[b].lp ? max_step_lp(it_.s_lp[b], d.ds_lp[b])
                                       : max_step(it_.s[b], d.ds[b]));
    return a;
  }

  // Builds S^{-1} per block and the HKM Schur complement
  // M_kl = <A_k, X A_l S^{-1}>, then factors it.
  bool factor_schur() {
    const std::size_t nb = rp_.blocks.size();
    const auto m = static_cast<Eigen::Index>(rp_.m);
    sinv_.assign(nb, {});
    sinv_lp_.assign(nb, {});
    MatrixXd schur = MatrixXd::Zero(m, m);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& blk = rp_.blocks[b];
      if (blk.lp) {
        sinv_lp_[b] = it_.s_lp[b].cwiseInverse();
        const VectorXd d = it_.x_lp[b].cwiseProduct(sinv_lp_[b]);
        // index -> (constraint, coefficient)
        std::vector<std::vector<std::pair<int, double>>> by_index(static_cast<std::size_t>(blk.n));
        for (int k : blk.touching)
          for (const auto& x : blk.a[static_cast<std::size_t>(k)])
            by_index[static_cast<std::size_t>(x.row)].emplace_back(k, x.value);
        for (std::size_t i = 0; i < by_index.size(); ++i) {
          const auto& list = by_index[i];
          const double di = d(static_cast<Eigen::Index>(i));
          for (std::size_t p = 0; p < list.size(); ++p)
            for (std::size_t q = p; q < list.size(); ++q) {
              const double v = list[p].second * list[q].second * di;
              schur(list[p].first, list[q].first) += v;
              if (list[p].first != list[q].first) schur(list[q].first, list[p].first) += v;
            }
        }
        continue;
      }
      Eigen::LLT<MatrixXd> llt(it_.s[b]);
      if (llt.info() != Eigen::Success) return false;
      sinv_[b] = llt.solve(MatrixXd::Identity(blk.n, blk.n));
      sinv_[b] = sym(sinv_[b]);
      const MatrixXd& x = it_.x[b];
      const MatrixXd& si = sinv_[b];
      const auto& touch = blk.touching;
      for (std::size_t ik = 0; ik < touch.size(); ++ik) {
        const auto& ak = blk.a[static_cast<std::size_t>(touch[ik])];
        for (std::size_t il = ik; il < touch.size(); ++il) {
          const auto& al = blk.a[static_cast<std::size_t>(touch[il])];
          double v = 0.0;
          for (const auto& e : ak)
            for (const auto& f : al) v += e.value * f.value * x(e.row, f.row) * si(f.col, e.col);
          schur(touch[ik], touch[il]) += v;
          if (il != ik) schur(touch[il], touch[ik]) += v;
        }
      }
    }
    schur_ = std::move(schur);
    pivoted_ = false;
    chol_.compute(schur_);
    if (chol_.info() == Eigen::Success) return true;
    // near the optimum the matrix can lose numerical definiteness; a pivoted
    // factorization copes better than regularizing
    ldlt_.compute(schur_);
    if (ldlt_.info() == Eigen::Success && (ldlt_.vectorD().array() > 0.0).all()) {
      pivoted_ = true;
      return true;
    }
    double reg = 0.0;
    const double dmax = m ? schur_.diagonal().cwiseAbs().maxCoeff() : 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      MatrixXd work = schur_;
      if (reg > 0.0) work.diagonal().array() += reg;
      chol_.compute(work);
      if (chol_.info() == Eigen::Success) return true;
      reg = reg == 0.0 ? 1e-14 * std::max(1.0, dmax) : reg * 100.0;
    }
    return false;
  }

  VectorXd solve_schur(const VectorXd& rhs) const {
    auto solve = [&](const VectorXd& v) -> VectorXd {
      if (pivoted_) return ldlt_.solve(v);
      return chol_.solve(v);
    };
    VectorXd dy = solve(rhs);
    // one step of iterative refinement against the unregularized matrix
    const VectorXd r = rhs - schur_ * dy;
    dy += solve(r);
    return dy;
  }

  Direction direction(double sigma, double mu, const Direction* pred) {
    const std::size_t nb = rp_.blocks.size();
    Direction d;
    d.dx.assign(nb, {});
    d.ds.assign(nb, {});
    d.dx_lp.assign(nb, {});
    d.ds_lp.assign(nb, {});
    std::vector<MatrixXd> extra(nb);
    std::vector<VectorXd> extra_lp(nb);

    VectorXd rhs = rp_.b;
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& blk = rp_.blocks[b];
      if (blk.lp) {
        VectorXd g = -sigma * mu * sinv_lp_[b] +
                     it_.x_lp[b].cwiseProduct(rd_lp_[b]).cwiseProduct(sinv_lp_[b]);
        if (pred) {
          extra_lp[b] = pred->dx_lp[b].cwiseProduct(pred->ds_lp[b]).cwiseProduct(sinv_lp_[b]);
          g += extra_lp[b];
        }
        apply_a_lp(blk, g, rhs);
      } else {
        MatrixXd g = -sigma * mu * sinv_[b] + it_.x[b] * rd_[b] * sinv_[b];
        if (pred) {
          extra[b] = pred->dx[b] * pred->ds[b] * sinv_[b];
          g += extra[b];
        }
        apply_a(blk, g, rhs);
      }
    }
    d.dy = rp_.m ? solve_schur(rhs) : VectorXd();

    auto fill = [&] {
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& blk = rp_.blocks[b];
        if (blk.lp) {
          d.ds_lp[b] = rd_lp_[b] - apply_at_lp(blk, d.dy);
          VectorXd dx = sigma * mu * sinv_lp_[b] - it_.x_lp[b] -
                        it_.x_lp[b].cwiseProduct(d.ds_lp[b]).cwiseProduct(sinv_lp_[b]);
          if (pred) dx -= extra_lp[b];
          d.dx_lp[b] = std::move(dx);
        } else {
          d.ds[b] = sym(rd_[b] - apply_at(blk, d.dy));
          MatrixXd dx = sigma * mu * sinv_[b] - it_.x[b] - it_.x[b] * d.ds[b] * sinv_[b];
          if (pred) dx -= extra[b];
          d.dx[b] = sym(dx);
        }
      }
    };
    fill();

    // Near the optimum the Schur complement is badly conditioned and the
    // primal residual of the step drifts; refine dy against A(X + dx) = b.
    for (int pass = 0; pass < 2 && rp_.m; ++pass) {
      VectorXd res = rp_.b;
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& blk = rp_.blocks[b];
        if (blk.lp) {
          apply_a_lp(blk, -(it_.x_lp[b] + d.dx_lp[b]), res);
        } else {
          apply_a(blk, -(it_.x[b] + d.dx[b]), res);
        }
      }
      if (res.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + bmax_)) break;
      d.dy += solve_schur(res);
      fill();
    }
    return d;
  }

  RealProblem rp_;
  Tolerances tol_;
  Iterate it_;
  std::size_t total_dim_ = 0;
  double bmax_ = 0.0;
  double cmax_ = 0.0;
  VectorXd rp_p_;
  std::vector<MatrixXd> rd_, sinv_;
  std::vector<VectorXd> rd_lp_, sinv_lp_;
  MatrixXd schur_;
  Eigen::LLT<MatrixXd> chol_;
  Eigen::LDLT<MatrixXd> ldlt_;
  bool pivoted_ = false;
};

struct Scaling {
  std::vector<double> row;  // per-constraint multiplier applied to A_k and b_k
  double b = 1.0;           // divides b
  double c = 1.0;           // divides C
};

Scaling scale_problem(RealProblem& rp) {
  Scaling sc;
  sc.row.assign(rp.m, 1.0);
  for (std::size_t k = 0; k < rp.m; ++k) {
    double s2 = 0.0;
    for (const auto& blk : rp.blocks)
      for (const auto& x : blk.a[k]) s2 += x.value * x.value;
    sc.row[k] = s2 > 0.0 ? 1.0 / std::sqrt(s2) : 1.0;
  }
  for (auto& blk : rp.blocks)
    for (std::size_t k = 0; k < rp.m; ++k)
      for (auto& x : blk.a[k]) x.value *= sc.row[k];
  for (std::size_t k = 0; k < rp.m; ++k) rp.b(static_cast<Eigen::Index>(k)) *= sc.row[k];

  double bmax = rp.m ? rp.b.lpNorm<Eigen::Infinity>() : 0.0;
  double cmax = 0.0;
  for (const auto& blk : rp.blocks)
    cmax = std::max(cmax, blk.lp ? blk.c_lp.lpNorm<Eigen::Infinity>() : blk.c.lpNorm<Eigen::Infinity>());
  sc.b = bmax > 0.0 ? bmax : 1.0;
  sc.c = cmax > 0.0 ? cmax : 1.0;
  rp.b /= sc.b;
  for (auto& blk : rp.blocks) {
    if (blk.lp) {
      blk.c_lp /= sc.c;
    } else {
      blk.c /= sc.c;
    }
  }
  return sc;
}

ComplexMatrix to_complex(const RealBlock& blk, const MatrixXd& x, double factor) {
  const int n = blk.original;
  ComplexMatrix z(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex v;
      if (blk.embedded) {
        v = Complex{0.5 * (x(i, j) + x(n + i, n + j)), 0.5 * (x(n + i, j) - x(i, n + j))};
      } else {
        v = Complex{x(i, j), 0.0};
      }
      z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = factor * v;
    }
  return z;
}

ComplexMatrix lp_to_complex(const VectorXd& v, double factor) {
  ComplexMatrix z(static_cast<std::size_t>(v.size()), static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    z(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = factor * v(i);
  return z;
}

SdpSolution recover(const RealProblem& rp, const Scaling& sc, const Iterate& it) {
  SdpSolution s;
  for (std::size_t b = 0; b < rp.blocks.size(); ++b) {
    const auto& blk = rp.blocks[b];
    if (blk.lp) {
      s.primal.push_back(lp_to_complex(it.x_lp[b], sc.b));
      s.slack.push_back(lp_to_complex(it.s_lp[b], sc.c));
    } else {
      s.primal.push_back(to_complex(blk, it.x[b], sc.b));
      // the embedded objective was halved, so the real slack is half the complex one
      s.slack.push_back(to_complex(blk, it.s[b], blk.embedded ? 2.0 * sc.c : sc.c));
    }
  }
  s.y.resize(rp.m);
  for (std::size_t k = 0; k < rp.m; ++k)
    s.y[k] = it.y(static_cast<Eigen::Index>(k)) * sc.row[k] * sc.c;
  return s;
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const Tolerances& t) {
  if (t.gap_tol <= 0.0 || t.feas_tol <= 0.0 || t.max_iterations <= 0)
    throw InputError("tolerances must be positive");
  p.validate();
  RealProblem rp = build_real(p);
  const Scaling sc = scale_problem(rp);

  auto accept = [&](const Iterate& it) {
    SdpSolution s = recover(rp, sc, it);
    const auto check = verify_solution(p, s);
    return check.within(t);
  };

  Solver solver(rp, t);
  int iterations = 0;
  std::string side;
  const Status status = solver.run(iterations, side, accept);

  SdpSolution s = recover(rp, sc, solver.iterate());
  s.status = status;
  s.iterations = iterations;
  s.infeasible_side = side;
  if (status == Status::infeasible) {
    // normalize the certificate direction
    if (side == "primal") {
      double by = 0.0;
      for (std::size_t k = 0; k < s.y.size(); ++k) by += p.constraints()[k].rhs * s.y[k];
      if (by != 0.0)
        for (auto& v : s.y) v /= by;
    } else {
      const double c = -apply_terms(p.objective(), s.primal);
      if (c != 0.0)
        for (auto& z : s.primal) z *= 1.0 / c;
    }
  }
  s.primal_objective = apply_terms(p.objective(), s.primal);
  s.dual_objective = 0.0;
  for (std::size_t k = 0; k < s.y.size(); ++k) s.dual_objective += p.constraints()[k].rhs * s.y[k];
  s.gap = (s.primal_objective - s.dual_objective) / (1.0 + std::abs(s.primal_objective));
  return s;
}

SdpSolution solve_or_throw(const SdpProblem& p, const Tolerances& t, const char* context) {
  SdpSolution s = solve(p, t);
  if (s.status != Status::optimal) {
    std::ostringstream os;
    os << context << ": solver finished with status " << to_string(s.status) << " after "
       << s.iterations << " iterations";
    throw SolverError(os.str(), s.status);
  }
  return s;
}

}  // namespace cbnorm::sdp
