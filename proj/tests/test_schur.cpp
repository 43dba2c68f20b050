#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "cbnorm/oracles.hpp"
#include "cbnorm/schur.hpp"

using namespace cbnorm;
using testing::complex_values;
using testing::random_matrix;

namespace {

void check_witness(const ComplexMatrix& u, const NormReport& r) {
  REQUIRE(r.witness.has_value());
  const auto fr = factorization_residual(u, *r.witness);
  CHECK(fr.residual <= 1e-6 * (1 + u.max_abs()));
  CHECK(fr.bound <= r.norm * (1 + 1e-5));
  CHECK(r.residual == fr.residual);
}

double max_abs(std::span<const Complex> v) {
  double m = 0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_CASE("schur_apply") {
  const auto x = random_matrix(3, 4);
  CHECK(schur_apply(ComplexMatrix::constant(3, 4, 1.0), x) == x);
  CHECK(schur_apply(ComplexMatrix(3, 4), x) == ComplexMatrix(3, 4));
  const auto sq = random_matrix(3, 3);
  const auto d = schur_apply(ComplexMatrix::identity(3), sq);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(d(i, j) == (i == j ? sq(i, i) : Complex{}));
  CHECK_THROWS_AS(schur_apply(ComplexMatrix(2, 2), x), InputError);
}

TEST_CASE("schur norm closed forms") {
  for (std::size_t n : {1u, 2u, 4u, 8u}) {
    const auto u = ComplexMatrix::constant(n, n, 1.0);
    const auto r = schur_norm(u);
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-6));
    check_witness(u, r);
  }
  for (int k = 0; k < 5; ++k) {
    const auto a = complex_values(4), b = complex_values(6);
    const auto u = ComplexMatrix::outer(a, b);
    const auto r = schur_norm(u);
    CHECK(r.norm == doctest::Approx(max_abs(a) * max_abs(b)).epsilon(1e-6));
    check_witness(u, r);
  }
  const auto h = ComplexMatrix::from_real_rows({{1, 1}, {1, -1}});
  CHECK(schur_norm(h).norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(schur_norm(ComplexMatrix(3, 3)).norm == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("unitary search oracle brackets the SDP value") {
  const auto h = ComplexMatrix::from_real_rows({{1, 1}, {1, -1}});
  const auto lb = oracle::unitary_search(h, 7);
  CHECK(lb.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  for (int k = 0; k < 5; ++k) {
    const auto u = random_matrix(5, 5);
    const double sdp = schur_norm(u).norm;
    const double lower = oracle::unitary_search(u, static_cast<std::uint64_t>(k), 200, 50).value;
    CHECK(lower <= sdp + 1e-6);
  }
}

TEST_CASE("schur norm dominates entries") {
  for (int k = 0; k < 50; ++k) {
    const auto u = random_matrix(6, 6);
    CHECK(schur_norm(u).norm >= u.max_abs() - 1e-7);
  }
}

TEST_CASE("PSD law") {
  for (std::size_t n : {3u, 5u, 9u}) {
    const auto v = random_matrix(n, 2);
    const auto u = v * v.adjoint();
    double dmax = 0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, u(i, i).real());
    const auto r = schur_norm(u);
    CHECK(r.norm == doctest::Approx(dmax).epsilon(1e-6));
    check_witness(u, r);
  }
}

TEST_CASE("submultiplicativity and transpose invariance") {
  for (int k = 0; k < 5; ++k) {
    const auto u = random_matrix(4, 5), v = random_matrix(4, 5);
    CHECK(schur_norm(hadamard(u, v)).norm <= schur_norm(u).norm * schur_norm(v).norm + 1e-5);
    CHECK(schur_norm(u.transpose()).norm == doctest::Approx(schur_norm(u).norm).epsilon(1e-6));
  }
}

TEST_CASE("rectangular real symbols take the real path") {
  const auto u = random_matrix(3, 7, false);
  const auto r = schur_norm(u);
  check_witness(u, r);
  CHECK(r.witness->xi.is_real());
}

TEST_CASE("factorization residual") {
  const auto a = complex_values(3), b = complex_values(2);
  SchurFactorization f{1, ComplexMatrix(3, 1), ComplexMatrix(2, 1)};
  for (std::size_t i = 0; i < 3; ++i) f.xi(i, 0) = a[i];
  for (std::size_t j = 0; j < 2; ++j) f.eta(j, 0) = std::conj(b[j]);
  const auto u = ComplexMatrix::outer(a, b);
  CHECK(factorization_residual(u, f).residual < 1e-15);
  CHECK(factorization_residual(u, f).bound == doctest::Approx(max_abs(a) * max_abs(b)));

  const auto ones = ComplexMatrix::constant(4, 4, 1.0);
  auto w = *schur_norm(ones).witness;
  CHECK(factorization_residual(ones, w).residual <= 1e-6);
  CHECK(factorization_residual(ones, w).bound <= 1 + 1e-5);
  w.xi(0, 0) += 0.1;
  CHECK(factorization_residual(ones, w).residual >= 0.05);
  CHECK_THROWS_AS(factorization_residual(ComplexMatrix(2, 2), w), InputError);
}

TEST_CASE("block norm") {
  const auto u = random_matrix(3, 3);
  const double su = schur_norm(u).norm;
  CHECK(schur_norm_block({{u}}).norm == doctest::Approx(su).epsilon(1e-6));
  const ComplexMatrix z(3, 3);
  CHECK(schur_norm_block({{u, z}, {z, u}}).norm == doctest::Approx(su).epsilon(1e-5));
  CHECK(schur_norm_block({{u, z}, {z, z}}).norm == doctest::Approx(su).epsilon(1e-5));
  CHECK_THROWS_AS(schur_norm_block({{u, ComplexMatrix(2, 2)}, {z, z}}), InputError);
  CHECK_THROWS_AS(schur_norm_block({{u, z}}), InputError);
}

TEST_CASE("two sided apply") {
  const auto a = random_matrix(3, 3);
  CHECK(two_sided_apply({{ComplexMatrix::identity(3), ComplexMatrix::identity(3)}}, a) == a);
  const auto e11 = ComplexMatrix::from_real_rows({{1, 0}, {0, 0}});
  const auto a2 = random_matrix(2, 2);
  CHECK(two_sided_apply({{e11, e11}}, a2) == e11 * a2(0, 0));
  // diagonal terms act as the Schur multiplier sum_k phi_k (x) psi_k
  TensorTerms terms;
  ComplexMatrix u(3, 3);
  for (int k = 0; k < 3; ++k) {
    const auto phi = complex_values(3), psi = complex_values(3);
    terms.emplace_back(ComplexMatrix::diagonal(phi), ComplexMatrix::diagonal(psi));
    u += ComplexMatrix::outer(phi, psi);
  }
  CHECK(max_abs_diff(two_sided_apply(terms, a), schur_apply(u, a)) < 1e-14);
  CHECK_THROWS_AS(two_sided_apply({{ComplexMatrix::identity(2), ComplexMatrix::identity(3)}}, a),
                  InputError);
}

TEST_CASE("slice maps") {
  const auto v = random_matrix(2, 2), w = random_matrix(3, 3);
  // F with tr(F^T v) = 1
  ComplexMatrix f(2, 2);
  f(0, 0) = 1.0 / v(0, 0);
  CHECK(max_abs_diff(slice(f, {{v, w}}, SliceSide::left), w) < 1e-14);
  CHECK(slice(ComplexMatrix(2, 2), {{v, w}}, SliceSide::left) == ComplexMatrix(3, 3));
  // u = phi (x) psi with diagonal matrices; point mass at i picks phi(i) psi
  const auto phi = complex_values(3), psi = complex_values(3);
  ComplexMatrix point(3, 3);
  point(1, 1) = 1.0;
  const auto s = slice(point, {{ComplexMatrix::diagonal(phi), ComplexMatrix::diagonal(psi)}}, SliceSide::left);
  CHECK(max_abs_diff(s, ComplexMatrix::diagonal(psi) * phi[1]) < 1e-14);
  const auto r = slice(point, {{ComplexMatrix::diagonal(phi), ComplexMatrix::diagonal(psi)}}, SliceSide::right);
  CHECK(max_abs_diff(r, ComplexMatrix::diagonal(phi) * psi[1]) < 1e-14);
  CHECK_THROWS_AS(slice(f, {{w, v}}, SliceSide::left), InputError);
}

TEST_CASE("predual norm examples") {
  ComplexMatrix e11(3, 3);
  e11(0, 0) = 1.0;
  CHECK(haagerup_predual_norm(e11).norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(haagerup_predual_norm(ComplexMatrix(2, 2)).norm == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(haagerup_predual_norm(ComplexMatrix::identity(2)).norm == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(haagerup_predual_norm_factored(ComplexMatrix::identity(2)).norm ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("predual norm: two routes agree and the duality inequality holds") {
  for (int k = 0; k < 5; ++k) {
    const auto mu = random_matrix(3, 4);
    const auto a = haagerup_predual_norm(mu), b = haagerup_predual_norm_factored(mu);
    CHECK(a.norm == doctest::Approx(b.norm).epsilon(1e-6));
    const auto u = random_matrix(3, 4);
    Complex s{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) s += u(i, j) * mu(i, j);
    CHECK(std::abs(s) <= schur_norm(u).norm * a.norm + 1e-5);
  }
}

TEST_CASE("predual norm is invariant under unimodular scaling") {
  const auto mu = random_matrix(3, 3);
  const double base = haagerup_predual_norm(mu).norm;
  for (double theta : {0.7, 2.0, 4.1}) {
    const auto rotated = mu * std::polar(1.0, theta);
    CHECK(haagerup_predual_norm(rotated).norm == doctest::Approx(base).epsilon(1e-6));
  }
  // the optimal symbol attains the supremum
  const auto r = haagerup_predual_norm(mu);
  REQUIRE(r.kernel.has_value());
  CHECK(schur_norm(*r.kernel).norm <= 1 + 1e-5);
}
