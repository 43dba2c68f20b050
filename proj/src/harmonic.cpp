#include "cbnorm/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace cbnorm {

namespace {

void check_function(const FiniteGroup& g, std::span<const Complex> u, const char* what) {
  if (u.size() != g.order()) {
    std::ostringstream os;
    os << what << ": function has " << u.size() << " values but the group has order " << g.order();
    throw InputError(os.str());
  }
  for (const auto& z : u)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError(std::string(what) + ": non-finite value");
}

void check_square(const ComplexMatrix& u, const FiniteGroup& g, const char* what) {
  if (u.rows() != g.order() || u.cols() != g.order()) {
    std::ostringstream os;
    os << what << ": matrix is " << u.rows() << "x" << u.cols() << " but the group has order "
       << g.order();
    throw InputError(os.str());
  }
}

}  // namespace

WordFunction word_table(std::map<Word, Complex> values) {
  return [values = std::move(values)](const Word& w) -> std::optional<Complex> {
    auto it = values.find(w);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// uniform in [-1, 1], determined by (word, seed, salt)
double word_hash(const Word& w, std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : w.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  const std::uint64_t r = splitmix64(h ^ splitmix64(seed) ^ (salt * 0x9e3779b97f4a7c15ULL));
  return static_cast<double>(r >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::uint64_t parse_seed(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw InputError("bad seed in multiplier family '" + spec + "'");
  return v;
}

}  // namespace

WordFunction word_family(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw InputError("multiplier family '" + spec + "' should look like name:argument");
  const std::string name = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (name == "decay") {
    std::size_t pos = 0;
    double r = 0.0;
    try {
      r = std::stod(arg, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != arg.size() || !std::isfinite(r))
      throw InputError("bad rate in multiplier family '" + spec + "'");
    return [r](const Word& w) -> std::optional<Complex> {
      return std::pow(r, static_cast<double>(w.length()));
    };
  }
  if (name == "indicator") {
    std::map<Word, Complex> table;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto end = std::min(arg.find(',', start), arg.size());
      const std::string tok = arg.substr(start, end - start);
      if (!tok.empty()) table[Word::parse(tok)] = 1.0;
      start = end + 1;
    }
    return [table = std::move(table)](const Word& w) -> std::optional<Complex> {
      return table.count(w) ? 1.0 : 0.0;
    };
  }
  if (name == "random") {
    const auto seed = parse_seed(arg, spec);
    return [seed](const Word& w) -> std::optional<Complex> { return word_hash(w, seed, 0); };
  }
  if (name == "crandom") {
    const auto seed = parse_seed(arg, spec);
    return [seed](const Word& w) -> std::optional<Complex> {
      return Complex{word_hash(w, seed, 0), word_hash(w, seed, 1)};
    };
  }
  throw InputError("unknown multiplier family '" + name + "'");
}

InvariantSchurMatrix herz_schur_matrix(const FiniteGroup& g, std::span<const Complex> u) {
  check_function(g, u, "herz_schur_matrix");
  const std::size_t n = g.order();
  ComplexMatrix m(n, n);
  for (Element s = 0; s < n; ++s)
    for (Element t = 0; t < n; ++t) m(s, t) = u[g.mul(s, g.inv(t))];
  return {std::move(m)};
}

ComplexMatrix herz_schur_matrix(const FiniteSection& f, const WordFunction& u) {
  std::vector<Complex> values(f.products().size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto v = u(f.products()[k]);
    if (!v) throw InputError("multiplier has no value at word " + f.products()[k].str());
    if (!std::isfinite(v->real()) || !std::isfinite(v->imag()))
      throw InputError("multiplier is not finite at word " + f.products()[k].str());
    values[k] = *v;
  }
  const std::size_t n = f.size();
  ComplexMatrix m(n, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) m(s, t) = values[f.mul_inv(s, t)];
  return m;
}

NormReport cb_norm(const FiniteGroup& g, std::span<const Complex> u, const sdp::Tolerances& tol) {
  return schur_norm(herz_schur_matrix(g, u).matrix, tol);
}

NormReport cb_norm(const FiniteSection& f, const WordFunction& u, const sdp::Tolerances& tol) {
  NormReport r = schur_norm(herz_schur_matrix(f, u), tol);
  r.lower_bound = true;
  std::ostringstream os;
  os << "lower bound from the radius-" << f.radius() << " ball (" << f.size() << " words)";
  r.note = os.str();
  return r;
}

std::vector<NormReport> cb_norm_sections(const std::vector<FiniteSection>& sections,
                                         const WordFunction& u, const sdp::Tolerances& tol) {
  for (std::size_t k = 1; k < sections.size(); ++k)
    if (sections[k].generators() != sections[0].generators() ||
        sections[k].radius() < sections[k - 1].radius())
      throw InputError("cb_norm_sections: sections are not nested");
  std::vector<NormReport> out;
  out.reserve(sections.size());
  for (const auto& f : sections) out.push_back(cb_norm(f, u, tol));
  return out;
}

double invariance_check(const ComplexMatrix& u, const FiniteGroup& g) {
  check_square(u, g, "invariance_check");
  const std::size_t n = g.order();
  double worst = 0.0;
  for (Element r = 0; r < n; ++r) {
    const Element ri = g.inv(r);
    for (Element s = 0; s < n; ++s)
      for (Element t = 0; t < n; ++t)
        worst = std::max(worst, std::abs(u(g.mul(s, r), t) - u(s, g.mul(t, ri))));
  }
  return worst;
}

InvariantSchurMatrix average_project(const ComplexMatrix& u, const FiniteGroup& g) {
  check_square(u, g, "average_project");
  const std::size_t n = g.order();
  // The orbit of class c = s t^{-1} is {(c b, b) : b in G}.
  std::vector<Complex> mean(n);
  for (Element c = 0; c < n; ++c) {
    const Complex v0 = u(c, 0);
    Complex dev{};
    for (Element b = 1; b < n; ++b) dev += u(g.mul(c, b), b) - v0;
    mean[c] = v0 + dev / static_cast<double>(n);
  }
  return herz_schur_matrix(g, mean);
}

GroupFunction multiplier_from_invariant(const ComplexMatrix& u, const FiniteGroup& g) {
  check_square(u, g, "multiplier_from_invariant");
  const std::size_t n = g.order();
  GroupFunction f(n);
  for (Element t = 0; t < n; ++t) f[t] = u(t, 0);
  const double tol = 1e-12 * std::max(1.0, u.max_abs());
  for (Element s = 0; s < n; ++s)
    for (Element t = 0; t < n; ++t)
      if (std::abs(u(s, t) - f[g.mul(s, g.inv(t))]) > tol) {
        std::ostringstream os;
        os << "matrix is not invariant: entry (" << s << ", " << t << ") disagrees with row 0";
        throw InputError(os.str());
      }
  return f;
}

GroupFunction p_map(const ComplexMatrix& m, const FiniteGroup& g) {
  check_square(m, g, "p_map");
  const std::size_t n = g.order();
  GroupFunction f(n);
  for (Element t = 0; t < n; ++t) {
    const Element ti = g.inv(t);
    for (Element s = 0; s < n; ++s) f[t] += m(s, g.mul(ti, s));
  }
  return f;
}

NormReport a_norm(const FiniteGroup& g, std::span<const Complex> u, const sdp::Tolerances& tol) {
  check_function(g, u, "a_norm");
  const std::size_t n = g.order();
  const bool real_data =
      std::all_of(u.begin(), u.end(), [](const Complex& z) { return z.imag() == 0.0; });

  // [[W1, M], [M^*, W2]] PSD with (tr W1 + tr W2)/2 minimal gives ||M||_1.
  sdp::SdpProblem p;
  const auto z = p.add_psd_block(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) p.add_objective({z, i, i, 0.5});
  for (Element t = 0; t < n; ++t) {
    const Element ti = g.inv(t);
    std::vector<sdp::Term> re, im;
    for (Element s = 0; s < n; ++s) {
      re.push_back({z, s, n + g.mul(ti, s), 1.0});
      im.push_back({z, s, n + g.mul(ti, s), Complex{0.0, -1.0}});
    }
    p.add_constraint(std::move(re), u[t].real());
    if (!real_data) p.add_constraint(std::move(im), u[t].imag());
  }

  const auto s = sdp::solve_or_throw(p, tol, "a_norm");
  NormReport r;
  r.norm = s.primal_objective;
  r.check = sdp::verify_solution(p, s);
  r.gap = r.check.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  ComplexMatrix m = s.primal[z].block(0, n, n, n);
  const GroupFunction pm = p_map(m, g);
  for (Element t = 0; t < n; ++t) r.residual = std::max(r.residual, std::abs(pm[t] - u[t]));
  r.kernel = std::move(m);
  r.note = "equals the B(G) norm for a finite group";
  return r;
}

}  // namespace cbnorm
