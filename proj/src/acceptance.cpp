#include "cbnorm/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "cbnorm/functorial.hpp"
#include "cbnorm/harmonic.hpp"
#include "cbnorm/oracles.hpp"
#include "cbnorm/predual.hpp"

namespace cbnorm::acceptance {

namespace {

using Rng = std::mt19937_64;

// Fixed limits for the solver hygiene criterion; deliberately independent of
// the configured solver tolerances.
constexpr double kGapLimit = 1e-7;
constexpr double kFeasLimit = 1e-8;
constexpr double kWitnessLimit = 1e-6;

constexpr const char* kNames[kCriteria] = {
    "Schur norm closed forms",
    "PSD unit-diagonal symbols",
    "Hadamard family",
    "multiplier norm equals Fourier algebra norm",
    "cyclic groups against the DFT",
    "predual norm equals C* norm",
    "restriction, extension and lift",
    "averaging projection",
    "free group sections",
    "solver hygiene",
};

struct Ledger {
  std::size_t programs = 0;
  std::size_t witnesses = 0;
  double gap = 0.0;
  double feasibility = 0.0;
  double witness = 0.0;

  void add(const NormReport& r) {
    if (r.status != sdp::Status::optimal) return;
    ++programs;
    gap = std::max(gap, std::abs(r.check.gap));
    feasibility = std::max({feasibility, r.check.primal_residual, r.check.dual_residual,
                            -r.check.primal_min_eig, -r.check.dual_min_eig});
    if (r.witness) {
      ++witnesses;
      witness = std::max(witness, r.residual);
    }
  }

  void merge(const Ledger& o) {
    programs += o.programs;
    witnesses += o.witnesses;
    gap = std::max(gap, o.gap);
    feasibility = std::max(feasibility, o.feasibility);
    witness = std::max(witness, o.witness);
  }
};

struct Context {
  Rng rng;
  Ledger ledger;
  sdp::Tolerances tol;

  double uniform() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  std::vector<Complex> complex_values(std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = {uniform(), uniform()};
    return v;
  }
  std::vector<Complex> real_values(std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = uniform();
    return v;
  }
  NormReport record(NormReport r) {
    ledger.add(r);
    return r;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

FiniteGroup quaternion() {
  return FiniteGroup::from_cayley_table({{0, 1, 2, 3, 4, 5, 6, 7},
                                         {1, 2, 3, 0, 7, 4, 5, 6},
                                         {2, 3, 0, 1, 6, 7, 4, 5},
                                         {3, 0, 1, 2, 5, 6, 7, 4},
                                         {4, 5, 6, 7, 2, 3, 0, 1},
                                         {5, 6, 7, 4, 1, 2, 3, 0},
                                         {6, 7, 4, 5, 0, 1, 2, 3},
                                         {7, 4, 5, 6, 3, 0, 1, 2}},
                                        "quaternion");
}

std::vector<Element> elements_of_order(const FiniteGroup& g, std::size_t k) {
  std::vector<Element> out;
  for (Element x = 1; x < g.order(); ++x) {
    Element p = x;
    std::size_t ord = 1;
    while (p != 0) {
      p = g.mul(p, x);
      ++ord;
    }
    if (ord == k) out.push_back(x);
  }
  return out;
}

// label of p in symmetric(n)
Element permutation(std::size_t n, const std::vector<std::size_t>& p) {
  std::vector<std::size_t> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = k;
  Element idx = 0;
  do {
    if (q == p) return idx;
    ++idx;
  } while (std::next_permutation(q.begin(), q.end()));
  throw InputError("not a permutation");
}

// ---------------------------------------------------------------------------

CriterionResult schur_closed_forms(Context& c) {
  double worst = 0.0;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const auto r = c.record(schur_norm(ComplexMatrix::constant(n, n, 1.0), c.tol));
    worst = std::max(worst, std::abs(r.norm - 1.0));
  }
  for (int k = 0; k < 20; ++k) {
    const auto a = c.complex_values(c.pick(1, 8)), b = c.complex_values(c.pick(1, 8));
    double ma = 0.0, mb = 0.0;
    for (const auto& z : a) ma = std::max(ma, std::abs(z));
    for (const auto& z : b) mb = std::max(mb, std::abs(z));
    const auto r = c.record(schur_norm(ComplexMatrix::outer(a, b), c.tol));
    worst = std::max(worst, std::abs(r.norm - ma * mb));
  }
  for (std::size_t n : {1u, 3u, 6u, 10u}) {
    const auto r = c.record(schur_norm(ComplexMatrix::identity(n), c.tol));
    worst = std::max(worst, std::abs(r.norm - 1.0));
  }
  return {1, kNames[0], worst, "|norm - closed form| = 0", 1e-6, worst <= 1e-6, 0.0,
          "28 symbols: all-ones, rank one, identity"};
}

CriterionResult psd_law(Context& c) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k) % 10;
    const std::size_t rank = c.pick(1, n);
    ComplexMatrix v(n, rank);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < rank; ++j) {
        v(i, j) = {c.uniform(), c.uniform()};
        s += std::norm(v(i, j));
      }
      for (std::size_t j = 0; j < rank; ++j) v(i, j) /= std::sqrt(s);
    }
    ComplexMatrix u = v * v.adjoint();
    for (std::size_t i = 0; i < n; ++i) u(i, i) = 1.0;
    const auto r = c.record(schur_norm(u, c.tol));
    worst = std::max(worst, std::abs(r.norm - 1.0));
  }
  return {2, kNames[1], worst, "|norm - 1| = 0", 1e-6, worst <= 1e-6, 0.0,
          "20 symbols of orders 3-12"};
}

CriterionResult hadamard(Context& c) {
  const auto h2 = ComplexMatrix::from_real_rows({{1, 1}, {1, -1}});
  const auto h4 = ComplexMatrix::from_real_rows(
      {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}});
  double worst = 0.0, oracle_gap = 0.0, oracle_excess = 0.0;
  const std::pair<const ComplexMatrix*, double> cases[] = {{&h2, std::sqrt(2.0)}, {&h4, 2.0}};
  for (const auto& [h, exact] : cases) {
    const auto r = c.record(schur_norm(*h, c.tol));
    worst = std::max(worst, std::abs(r.norm - exact));
    const auto lb = oracle::unitary_search(*h, c.rng());
    oracle_gap = std::max(oracle_gap, r.norm - lb.value);
    oracle_excess = std::max(oracle_excess, lb.value - r.norm);
  }
  const bool pass = worst <= 1e-4 && oracle_gap <= 1e-3 && oracle_excess <= 1e-6;
  return {3, kNames[2], worst, "sqrt 2 and 2", 1e-4, pass, 0.0,
          "unitary-search lower bound within " + sci(oracle_gap) + " (limit 1e-3), excess " +
              sci(oracle_excess)};
}

CriterionResult main_isometry(Context& c) {
  std::vector<FiniteGroup> groups;
  for (std::size_t n : {2u, 3u, 4u, 6u, 8u, 12u}) groups.push_back(cyclic(n));
  groups.push_back(dihedral(4));
  groups.push_back(symmetric(3));
  groups.push_back(quaternion());
  double worst = 0.0;
  for (const auto& g : groups)
    for (int k = 0; k < 20; ++k) {
      const auto u = c.complex_values(g.order());
      const auto cb = c.record(cb_norm(g, u, c.tol));
      const auto a = c.record(a_norm(g, u, c.tol));
      worst = std::max(worst, std::abs(cb.norm - a.norm) / (1.0 + a.norm));
    }
  return {4, kNames[3], worst, "|cb - A| / (1 + A) = 0", 1e-4,
          worst <= 1e-4, 0.0, "9 groups x 20 complex multipliers"};
}

CriterionResult cyclic_closed_form(Context& c) {
  double worst = 0.0;
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u, 7u, 8u, 12u, 16u}) {
    const auto g = cyclic(n);
    for (int k = 0; k < 5; ++k) {
      const auto u = c.real_values(n);
      const auto r = c.record(cb_norm(g, u, c.tol));
      worst = std::max(worst, std::abs(r.norm - oracle::cyclic_multiplier_norm(u)));
    }
  }
  return {5, kNames[4], worst, "|cb - sum |u^(k)|| = 0", 1e-4, worst <= 1e-4,
          0.0, "orders 2-16, 5 real multipliers each"};
}

CriterionResult predual_chain(Context& c) {
  std::vector<FiniteGroup> groups;
  for (std::size_t n : {1u, 2u, 3u, 4u, 6u, 12u}) groups.push_back(cyclic(n));
  groups.push_back(direct_product(cyclic(2), cyclic(2)));
  groups.push_back(symmetric(3));
  groups.push_back(dihedral(4));
  groups.push_back(quaternion());
  groups.push_back(dihedral(6));
  double worst = 0.0, cert = 0.0, tight = 0.0, primal = 0.0;
  for (const auto& g : groups)
    for (int k = 0; k < 20; ++k) {
      const auto f = c.complex_values(g.order());
      const auto q = c.record(q_norm(g, f, c.tol));
      const double cs = c_star_norm(g, f);
      worst = std::max(worst, std::abs(q.norm - cs) / (1.0 + cs));
      cert = std::max(cert, c.record(cb_norm(g, q.optimizer, c.tol)).norm - 1.0);
      tight = std::max(tight, std::abs(pairing(q.optimizer, f) - q.norm));
      primal = std::max(primal, q.norm - c.record(q_norm_primal(g, f, c.tol)).norm);
    }
  const bool pass = worst <= 1e-4 && cert <= 1e-5 && tight <= 1e-6 && primal <= 1e-4;
  return {6, kNames[5], worst, "|q - C*| / (1 + C*) = 0", 1e-4, pass, 0.0,
          "certificate cb - 1 = " + sci(cert) + " (limit 1e-5), pairing slack " + sci(tight) +
              " (limit 1e-6), q - primal route " + sci(primal) + " (limit 1e-4)"};
}

CriterionResult functorial_suite(Context& c) {
  const auto s3 = symmetric(3), s4 = symmetric(4), d4 = dihedral(4), d6 = dihedral(6),
             q8 = quaternion(), c12 = cyclic(12), c4 = cyclic(4);
  const auto a3 = subgroup_closure(s3, elements_of_order(s3, 3));
  const auto a4 = subgroup_closure(s4, elements_of_order(s4, 3));
  const Element swap01 = permutation(3, {1, 0, 2});
  const std::vector<Element> klein{0, permutation(4, {1, 0, 3, 2}), permutation(4, {2, 3, 0, 1}),
                                   permutation(4, {3, 2, 1, 0})};
  auto closure = [](const FiniteGroup& g, std::vector<Element> gens) {
    return subgroup_closure(g, gens);
  };

  const std::vector<std::pair<const FiniteGroup*, std::vector<Element>>> restrictions{
      {&s3, a3},       {&s3, closure(s3, {swap01})}, {&d4, closure(d4, {1})},
      {&c12, closure(c12, {2})}, {&q8, closure(q8, {1})}, {&s4, a4}};
  const std::vector<std::pair<const FiniteGroup*, std::vector<Element>>> extensions{
      {&s3, a3}, {&c12, closure(c12, {3})}, {&d4, closure(d4, {1})},
      {&s4, a4}, {&q8, closure(q8, {4})},   {&d6, closure(d6, {2})}};
  const std::vector<std::pair<const FiniteGroup*, std::vector<Element>>> lifts{
      {&c4, {0, 2}}, {&s3, a3}, {&d4, {0, 2}}, {&q8, {0, 2}}, {&c12, {0, 4, 8}}, {&s4, klein}};

  double worst = 0.0;
  std::size_t cases = 0;
  auto account = [&](const NormComparison& cmp) {
    c.ledger.add(cmp.source);
    c.ledger.add(cmp.image);
    const double d = cmp.image.norm - cmp.source.norm;
    worst = std::max(worst, cmp.relation == "equal" ? std::abs(d) : d);
    ++cases;
  };
  for (const auto& [g, h] : restrictions) {
    const auto sub = make_subgroup(*g, h);
    for (int k = 0; k < 5; ++k) account(verify_restrict(c.complex_values(g->order()), sub, 1e-4, c.tol));
  }
  for (const auto& [g, h] : extensions) {
    const auto sub = make_subgroup(*g, h);
    for (int k = 0; k < 5; ++k)
      account(verify_extend(c.complex_values(sub.group.order()), sub, 1e-4, c.tol));
  }
  for (const auto& [g, n] : lifts) {
    const auto q = quotient(*g, n);
    for (int k = 0; k < 5; ++k)
      account(verify_lift(c.complex_values(q.group.order()), q, 1e-4, c.tol));
  }
  return {7, kNames[6], worst, "norm relation violation = 0", 1e-4,
          worst <= 1e-4, 0.0, std::to_string(cases) + " comparisons on 18 (G, H or N) instances"};
}

CriterionResult averaging(Context& c) {
  std::vector<FiniteGroup> groups{cyclic(3), cyclic(4), symmetric(3), dihedral(4), quaternion()};
  double worst = 0.0;
  bool exact = true;
  for (const auto& g : groups) {
    const std::size_t n = g.order();
    for (int k = 0; k < 20; ++k) {
      ComplexMatrix u(n, n);
      for (auto& z : u.entries()) z = {c.uniform(), c.uniform()};
      const auto e = average_project(u, g).matrix;
      exact = exact && average_project(e, g).matrix == e && invariance_check(e, g) == 0.0;
      exact = exact && invariance_check(u, g) > 0.0 && !(e == u);
      const auto w = herz_schur_matrix(g, c.complex_values(n)).matrix;
      exact = exact && invariance_check(w, g) == 0.0 && average_project(w, g).matrix == w;
      const double before = c.record(schur_norm(u, c.tol)).norm;
      const double after = c.record(schur_norm(e, c.tol)).norm;
      worst = std::max(worst, after - before);
    }
  }
  return {8, kNames[7], worst, "schur(EU) - schur(U) <= 0", 1e-5, exact && worst <= 1e-5,
          0.0, std::string("idempotence and fixed points exact: ") + (exact ? "yes" : "no")};
}

CriterionResult free_sections(Context& c) {
  double worst = 0.0, min_eig = 0.0, diag = 0.0;
  for (double r : {0.3, 0.5, 0.9}) {
    const auto u = word_family("decay:" + sci(r));
    for (std::size_t k = 1; k <= 3; ++k) {
      const FiniteSection f(2, k);
      const auto m = herz_schur_matrix(f, u);
      min_eig = std::min(min_eig, hermitian_eigenvalues(m).front());
      for (std::size_t i = 0; i < m.rows(); ++i) diag = std::max(diag, std::abs(m(i, i) - 1.0));
      const auto rep = c.record(cb_norm(f, u, c.tol));
      worst = std::max(worst, std::abs(rep.norm - 1.0));
    }
  }
  double drop = 0.0;
  auto monotone = [&](std::size_t gens, std::size_t r0, std::size_t r1, const WordFunction& u) {
    std::vector<FiniteSection> sections;
    for (std::size_t k = r0; k <= r1; ++k) sections.emplace_back(gens, k);
    const auto reps = cb_norm_sections(sections, u, c.tol);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      c.ledger.add(reps[k]);
      if (k > 0) drop = std::max(drop, reps[k - 1].norm - reps[k].norm);
    }
  };
  monotone(2, 1, 3, word_family("random:" + std::to_string(c.rng() % 1000)));
  monotone(1, 1, 4, word_family("indicator:e,a"));
  monotone(1, 1, 4, word_family("crandom:" + std::to_string(c.rng() % 1000)));
  const bool pass = worst <= 1e-6 && min_eig >= -1e-10 && diag == 0.0 && drop <= 1e-7;
  return {9, kNames[8], worst, "|norm - 1| = 0", 1e-6, pass, 0.0,
          "min eigenvalue " + sci(min_eig) + " (limit -1e-10), largest norm decrease " + sci(drop) +
              " (limit 1e-7)"};
}

using CriterionFn = CriterionResult (*)(Context&);

constexpr CriterionFn kCriteriaFns[] = {schur_closed_forms, psd_law,  hadamard,
                                        main_isometry,      cyclic_closed_form, predual_chain,
                                        functorial_suite,   averaging, free_sections};

CriterionResult hygiene(const Ledger& l) {
  const double ratio = std::max({l.gap / kGapLimit, l.feasibility / kFeasLimit, l.witness / kWitnessLimit});
  std::ostringstream os;
  os << l.programs << " programs, worst gap " << sci(l.gap) << ", worst feasibility "
     << sci(l.feasibility) << "; " << l.witnesses << " witnesses, worst residual " << sci(l.witness);
  return {10, kNames[9], ratio, "worst value / limit <= 1", 1.0, l.programs > 0 && ratio <= 1.0,
          0.0, os.str()};
}

}  // namespace

std::vector<CriterionResult> run(const Config& config) {
  auto wanted = [&](int id) {
    return config.only.empty() || std::find(config.only.begin(), config.only.end(), id) != config.only.end();
  };
  // Hygiene audits every program, so asking for it runs the whole suite.
  const bool all = wanted(kCriteria);
  std::vector<int> ids;
  for (int id = 1; id < kCriteria; ++id)
    if (all || wanted(id)) ids.push_back(id);

  std::vector<CriterionResult> results(ids.size());
  std::vector<Ledger> ledgers(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < ids.size();) {
      const int id = ids[k];
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(id)};
      Context ctx{Rng(seq), {}, config.tol};
      const auto t0 = std::chrono::steady_clock::now();
      CriterionResult r;
      try {
        r = kCriteriaFns[id - 1](ctx);
      } catch (const std::exception& e) {
        r.id = id;
        r.name = kNames[id - 1];
        r.pass = false;
        r.measured = std::nan("");
        r.detail = std::string("error: ") + e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[k] = std::move(r);
      ledgers[k] = ctx.ledger;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, ids.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<CriterionResult> out;
  Ledger total;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    total.merge(ledgers[k]);
    if (wanted(ids[k])) out.push_back(std::move(results[k]));
  }
  if (all) out.push_back(hygiene(total));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %2d  %-44s measured %-10s tolerance %-7s %7.2fs  target %s; %s",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), sci(r.measured).c_str(),
                sci(r.tolerance).c_str(), r.seconds, r.target.c_str(), r.detail.c_str());
  return buf;
}

}  // namespace cbnorm::acceptance
