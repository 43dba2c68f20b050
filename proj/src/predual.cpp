#include "cbnorm/predual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbnorm {

namespace {

void check_function(const FiniteGroup& g, std::span<const Complex> f, const char* what) {
  if (f.size() != g.order()) {
    std::ostringstream os;
    os << what << ": function has " << f.size() << " values but the group has order " << g.order();
    throw InputError(os.str());
  }
  for (const auto& z : f)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError(std::string(what) + ": non-finite value");
}

bool all_real(std::span<const Complex> f) {
  return std::all_of(f.begin(), f.end(), [](const Complex& z) { return z.imag() == 0.0; });
}

}  // namespace

GroupFunction convolve_m0(const ComplexMatrix& mu, const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (mu.rows() != n || mu.cols() != n) throw InputError("convolve_m0: tensor does not match group order");
  GroupFunction f(n);
  for (Element s = 0; s < n; ++s)
    for (Element t = 0; t < n; ++t) f[g.mul(s, t)] += mu(s, t);
  return f;
}

Complex pairing(std::span<const Complex> u, std::span<const Complex> f) {
  if (u.size() != f.size()) {
    std::ostringstream os;
    os << "pairing: lengths differ (" << u.size() << " and " << f.size() << ")";
    throw InputError(os.str());
  }
  Complex s{};
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * f[k];
  return s;
}

double c_star_norm(const FiniteGroup& g, std::span<const Complex> f) {
  return operator_norm(left_regular_matrix(g, f));
}

NormReport q_norm(const FiniteGroup& g, std::span<const Complex> f, const sdp::Tolerances& tol) {
  check_function(g, f, "q_norm");
  const std::size_t n = g.order();
  const bool real_data = all_real(f);
  const double inv_n = 1.0 / static_cast<double>(n);

  // Gram [[X, U], [U^*, Y]] with U(s, t) tied to a single value per product s t.
  sdp::SdpProblem p;
  const auto z = p.add_psd_block(2 * n);
  const auto lp = p.add_nonneg_block(2 * n);
  std::vector<std::pair<Element, Element>> first(n, {n, n});
  for (Element s = 0; s < n; ++s)
    for (Element t = 0; t < n; ++t) {
      const Element r = g.mul(s, t);
      if (f[r] != Complex{}) p.add_objective({z, s, n + t, -f[r] * inv_n});
      auto& [s0, t0] = first[r];
      if (s0 == n) {
        s0 = s;
        t0 = t;
        continue;
      }
      p.add_constraint({{z, s, n + t, 1.0}, {z, s0, n + t0, -1.0}}, 0.0);
      if (!real_data)
        p.add_constraint({{z, s, n + t, Complex{0.0, -1.0}}, {z, s0, n + t0, Complex{0.0, 1.0}}}, 0.0);
    }
  for (std::size_t i = 0; i < 2 * n; ++i) p.add_constraint({{z, i, i, 1.0}, {lp, i, i, 1.0}}, 1.0);

  const auto s = sdp::solve_or_throw(p, tol, "q_norm");
  NormReport r;
  r.norm = -s.primal_objective;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  r.optimizer.assign(n, Complex{});
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) r.optimizer[g.mul(a, b)] += s.primal[z](a, n + b) * inv_n;
  r.residual = std::abs(pairing(r.optimizer, f) - r.norm);
  return r;
}

NormReport q_norm_primal(const FiniteGroup& g, std::span<const Complex> f, const sdp::Tolerances& tol) {
  check_function(g, f, "q_norm_primal");
  const std::size_t n = g.order();
  const bool real_data = all_real(f);

  // [[diag a, mu], [mu^*, diag b]] PSD, minimize (sum a + sum b)/2, m0(mu) = f.
  sdp::SdpProblem p;
  const auto z = p.add_psd_block(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) p.add_objective({z, i, i, 0.5});
  std::vector<std::vector<sdp::Term>> re(n), im(n);
  for (Element s = 0; s < n; ++s)
    for (Element t = 0; t < n; ++t) {
      re[g.mul(s, t)].push_back({z, s, n + t, 1.0});
      im[g.mul(s, t)].push_back({z, s, n + t, Complex{0.0, -1.0}});
    }
  for (Element r = 0; r < n; ++r) {
    p.add_constraint(std::move(re[r]), f[r].real());
    if (!real_data) p.add_constraint(std::move(im[r]), f[r].imag());
  }
  for (std::size_t base : {std::size_t{0}, n})
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        p.add_constraint({{z, base + a, base + b, 1.0}}, 0.0);
        if (!real_data) p.add_constraint({{z, base + a, base + b, Complex{0.0, -1.0}}}, 0.0);
      }

  const auto s = sdp::solve_or_throw(p, tol, "q_norm_primal");
  NormReport r;
  r.norm = s.primal_objective;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  ComplexMatrix mu = s.primal[z].block(0, n, n, n);
  const GroupFunction m0 = convolve_m0(mu, g);
  for (Element k = 0; k < n; ++k) r.residual = std::max(r.residual, std::abs(m0[k] - f[k]));
  r.kernel = std::move(mu);
  return r;
}

}  // namespace cbnorm
