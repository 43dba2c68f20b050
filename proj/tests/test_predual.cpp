#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <numbers>

#include "cbnorm/harmonic.hpp"
#include "cbnorm/predual.hpp"

using namespace cbnorm;
using testing::complex_values;
using testing::delta;

namespace {

std::vector<FiniteGroup> groups() {
  return {cyclic(2), cyclic(6), dihedral(3), testing::quaternion(), direct_product(cyclic(2), cyclic(3))};
}

double l1(std::span<const Complex> f) {
  double s = 0;
  for (auto z : f) s += std::abs(z);
  return s;
}

}  // namespace

TEST_CASE("m0 examples") {
  const auto g = dihedral(3);
  const auto n = g.order();
  ComplexMatrix e(n, n);
  e(0, 0) = 1.0;
  CHECK(convolve_m0(e, g) == delta(n, 0));
  const auto f = complex_values(n), h = complex_values(n);
  const auto m0 = convolve_m0(ComplexMatrix::outer(f, h), g);
  CHECK(testing::max_diff(m0, convolve(g, f, h)) < 1e-14);
  CHECK(convolve_m0(ComplexMatrix::identity(2), cyclic(2)) == GroupFunction{2.0, 0.0});
}

TEST_CASE("q norm examples") {
  for (const auto& g : groups()) {
    CHECK(q_norm(g, delta(g.order(), 0)).norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(q_norm(g, GroupFunction(g.order())).norm == doctest::Approx(0.0).epsilon(1e-6));
  }
  const GroupFunction f{1.0, -1.0};
  CHECK(q_norm(cyclic(2), f).norm == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(q_norm_primal(cyclic(2), f).norm == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("pairing and C* norm examples") {
  CHECK(pairing(std::vector<Complex>(4, 1.0), delta(4, 0)) == Complex(1.0));
  CHECK(pairing(delta(4, 2), delta(4, 2)) == Complex(1.0));
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  CHECK(std::abs(pairing(std::vector<Complex>{1.0, w, w * w}, std::vector<Complex>(3, 1.0))) < 1e-15);
  CHECK_THROWS_AS(pairing(delta(3, 0), delta(4, 0)), InputError);

  const auto g = symmetric(3);
  CHECK(c_star_norm(g, delta(6, 0)) == doctest::Approx(1.0));
  CHECK(c_star_norm(g, delta(6, 4)) == doctest::Approx(1.0));
  CHECK(c_star_norm(cyclic(2), std::vector<Complex>{1.0, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("certificate tightness and the amenable chain") {
  for (const auto& g : groups()) {
    for (int k = 0; k < 3; ++k) {
      const auto f = complex_values(g.order());
      const auto r = q_norm(g, f);
      REQUIRE(r.optimizer.size() == g.order());
      CHECK(std::abs(pairing(r.optimizer, f) - Complex(r.norm)) <= 1e-6);
      CHECK(cb_norm(g, r.optimizer).norm <= 1 + 1e-5);
      const double cs = c_star_norm(g, f);
      CHECK(std::abs(r.norm - cs) <= 1e-4 * (1 + cs));
      CHECK(q_norm_primal(g, f).norm == doctest::Approx(r.norm).epsilon(1e-4));
    }
  }
}

TEST_CASE("Hoelder pairing") {
  for (const auto& g : groups()) {
    const auto u = complex_values(g.order()), f = complex_values(g.order());
    CHECK(std::abs(pairing(u, f)) <= cb_norm(g, u).norm * q_norm(g, f).norm + 1e-5);
  }
}

TEST_CASE("seminorm laws and dominance") {
  for (const auto& g : groups()) {
    const auto f = complex_values(g.order()), h = complex_values(g.order());
    const double qf = q_norm(g, f).norm;
    const Complex alpha{-1.5, 0.7};
    GroupFunction af(f.size()), sum(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      af[k] = alpha * f[k];
      sum[k] = f[k] + h[k];
    }
    CHECK(std::abs(q_norm(g, af).norm - std::abs(alpha) * qf) <= 1e-6 * (1 + std::abs(alpha) * qf));
    CHECK(q_norm(g, sum).norm <= qf + q_norm(g, h).norm + 1e-5);
    CHECK(qf <= l1(f) + 1e-6);
  }
}
