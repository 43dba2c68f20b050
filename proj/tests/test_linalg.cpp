#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace cbnorm;
using testing::random_matrix;

TEST_CASE("construction validates shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), InputError);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex{std::nan(""), 0.0}}), InputError);
  const auto m = ComplexMatrix::from_rows({{1.0, Complex{0.0, 2.0}}, {3.0, 4.0}});
  CHECK(m(0, 1) == Complex{0.0, 2.0});
  CHECK(m.adjoint()(1, 0) == Complex{0.0, -2.0});
  CHECK(m.transpose()(1, 0) == Complex{0.0, 2.0});
  CHECK(!m.is_real());
  CHECK(ComplexMatrix::identity(3).is_real());
}

TEST_CASE("product and hadamard") {
  const auto a = ComplexMatrix::from_real_rows({{1, 2}, {3, 4}});
  const auto b = ComplexMatrix::from_real_rows({{0, 1}, {1, 0}});
  CHECK(a * b == ComplexMatrix::from_real_rows({{2, 1}, {4, 3}}));
  CHECK(hadamard(a, b) == ComplexMatrix::from_real_rows({{0, 2}, {3, 0}}));
  CHECK_THROWS_AS(hadamard(a, ComplexMatrix(2, 3)), InputError);
}

TEST_CASE("hermitian eigendecomposition reconstructs the matrix") {
  for (std::size_t n : {1u, 2u, 5u, 12u}) {
    const auto x = random_matrix(n, n);
    const auto h = x + x.adjoint();
    const auto e = hermitian_eig(h);
    REQUIRE(e.values.size() == n);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    std::vector<Complex> d(e.values.begin(), e.values.end());
    const auto back = e.vectors * ComplexMatrix::diagonal(d) * e.vectors.adjoint();
    CHECK(max_abs_diff(back, h) < 1e-12);
    CHECK(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)) < 1e-12);
  }
}

TEST_CASE("non-hermitian input is rejected") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::from_real_rows({{1, 2}, {0, 1}})), InputError);
}

TEST_CASE("singular values against a known spectrum") {
  // [[3, 0], [4, 5]] has singular values 3 sqrt 5 and sqrt 5
  const auto a = ComplexMatrix::from_real_rows({{3, 0}, {4, 5}});
  const auto s = singular_values(a);
  CHECK(s[0] == doctest::Approx(3 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(operator_norm(a) == doctest::Approx(3 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(trace_norm(a) == doctest::Approx(4 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix(3, 2)) == 0.0);
}

TEST_CASE("trace norm is unitarily invariant and dominates the operator norm") {
  for (int k = 0; k < 5; ++k) {
    const auto a = random_matrix(4, 6);
    const auto h = random_matrix(4, 4);
    const auto q = hermitian_eig(h + h.adjoint()).vectors;
    CHECK(trace_norm(q * a) == doctest::Approx(trace_norm(a)).epsilon(1e-10));
    CHECK(trace_norm(a) >= operator_norm(a));
  }
}

TEST_CASE("psd factor") {
  const auto v = random_matrix(6, 3);
  const auto a = v * v.adjoint();
  const auto l = psd_factor(a, 1e-10, 1e-9);
  CHECK(l.cols() == 3);
  CHECK(max_abs_diff(l * l.adjoint(), a) < 1e-10);
  CHECK_THROWS_AS(psd_factor(ComplexMatrix::from_real_rows({{1, 0}, {0, -1}}), 1e-10), InputError);
}

TEST_CASE("eigenvalues of small hand-checked matrices") {
  auto ev = [](std::vector<std::vector<double>> rows) {
    return hermitian_eigenvalues(ComplexMatrix::from_real_rows(rows));
  };
  CHECK(ev({{1, 0}, {0, 1}}) == std::vector<double>{1.0, 1.0});
  const auto swap = ev({{0, 1}, {1, 0}});
  CHECK(swap[0] == doctest::Approx(-1.0));
  CHECK(swap[1] == doctest::Approx(1.0));
  // characteristic polynomial (2 - x)^2 - 1
  const auto e = ev({{2, 1}, {1, 2}});
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("operator and trace norm examples") {
  CHECK(operator_norm(ComplexMatrix(4, 4)) == 0.0);
  for (std::size_t n : {1u, 3u, 8u}) {
    CHECK(operator_norm(ComplexMatrix::constant(n, n, 1.0)) == doctest::Approx(double(n)).epsilon(1e-12));
    CHECK(trace_norm(ComplexMatrix::identity(n)) == doctest::Approx(double(n)).epsilon(1e-12));
  }
  const auto x = random_matrix(5, 5);
  const auto q = hermitian_eig(x + x.adjoint()).vectors;
  CHECK(operator_norm(q) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_norm(ComplexMatrix::from_real_rows({{1, 1}, {1, -1}})) ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rank one: trace norm equals operator norm equals product of lengths") {
  for (int k = 0; k < 10; ++k) {
    const auto f = testing::complex_values(5), g = testing::complex_values(3);
    double nf = 0, ng = 0;
    for (auto z : f) nf += std::norm(z);
    for (auto z : g) ng += std::norm(z);
    // f g^* with entries f_i conj(g_j)
    ComplexMatrix m(5, 3);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = f[i] * std::conj(g[j]);
    CHECK(trace_norm(m) == doctest::Approx(std::sqrt(nf * ng)).epsilon(1e-10));
    CHECK(operator_norm(m) == doctest::Approx(trace_norm(m)).epsilon(1e-10));
  }
  const auto full = random_matrix(4, 4);
  CHECK(trace_norm(full) > operator_norm(full) * (1 + 1e-6));
}

TEST_CASE("largest |eigenvalue| is the operator norm for hermitian matrices") {
  for (std::size_t n : {2u, 6u, 20u}) {
    const auto x = random_matrix(n, n);
    const auto h = x + x.adjoint();
    const auto e = hermitian_eigenvalues(h);
    const double m = std::max(std::abs(e.front()), std::abs(e.back()));
    CHECK(m == doctest::Approx(operator_norm(h)).epsilon(1e-9));
  }
}

TEST_CASE("psd factor examples") {
  const auto l = psd_factor(ComplexMatrix::identity(2), 1e-12);
  CHECK(max_abs_diff(l * l.adjoint(), ComplexMatrix::identity(2)) < 1e-14);
  const auto d = psd_factor(ComplexMatrix::from_real_rows({{4, 0}, {0, 0}}), 1e-12, 1e-12);
  REQUIRE(d.cols() == 1);
  CHECK(std::abs(d(0, 0)) == doctest::Approx(2.0));
  CHECK(std::abs(d(1, 0)) < 1e-14);
  const auto a = ComplexMatrix::from_real_rows({{2, 1}, {1, 2}});
  const auto f = psd_factor(a, 1e-12);
  CHECK(max_abs_diff(f * f.adjoint(), a) < 1e-10);
}

TEST_CASE("psd factor reproduces random PSD matrices") {
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k) * 63 / 99;
    const auto v = random_matrix(n, 1 + static_cast<std::size_t>(k) % n);
    const auto a = v * v.adjoint();
    const double tol = 1e-12;
    const auto l = psd_factor(a, tol * std::max(1.0, operator_norm(a)));
    CHECK(operator_norm(l * l.adjoint() - a) <= 10 * tol * std::max(1.0, operator_norm(a)));
  }
}
