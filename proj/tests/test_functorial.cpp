#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "cbnorm/functorial.hpp"
#include "cbnorm/harmonic.hpp"

using namespace cbnorm;
using testing::complex_values;
using testing::delta;

TEST_CASE("pullback") {
  const auto s3 = symmetric(3);
  const GroupHomomorphism id(s3, s3, {0, 1, 2, 3, 4, 5});
  const auto u = complex_values(6);
  CHECK(pullback(u, id) == u);
  const auto red = quotient(cyclic(4), std::vector<Element>{0, 2}).projection;
  const std::vector<Complex> v{2.0, -0.5};
  CHECK(pullback(v, red) == GroupFunction{2.0, -0.5, 2.0, -0.5});
  const auto sign = quotient(s3, std::vector<Element>{0, 3, 4}).projection;
  CHECK(pullback(std::vector<Complex>(2, Complex(0.3, 1)), sign) == GroupFunction(6, Complex(0.3, 1)));
  CHECK_THROWS_AS(pullback(u, red), InputError);
}

TEST_CASE("pullback is functorial") {
  const auto s4 = symmetric(4);
  // S4 -> S3 -> C2 through the Klein quotient and the sign
  const std::vector<Element> klein{0, 7, 16, 23};
  const auto q = quotient(s4, klein);
  const auto sign = quotient(q.group, subgroup_closure(q.group, std::vector<Element>{})).projection;
  const auto comp = compose(sign, q.projection);
  const auto u = complex_values(sign.target().order());
  CHECK(pullback(u, comp) == pullback(pullback(u, sign), q.projection));
  const auto inc = make_subgroup(s4, klein).inclusion;
  const auto w = complex_values(q.group.order());
  CHECK(pullback(w, compose(q.projection, inc)) == pullback(pullback(w, q.projection), inc));
}

TEST_CASE("restriction") {
  const auto s3 = symmetric(3);
  const auto u = complex_values(6);
  const std::vector<Element> all{0, 1, 2, 3, 4, 5};
  CHECK(restrict(u, make_subgroup(s3, all)) == u);
  const auto triv = make_subgroup(s3, std::vector<Element>{0});
  CHECK(restrict(u, triv) == GroupFunction{u[0]});
  CHECK(cb_norm(triv.group, restrict(u, triv)).norm == doctest::Approx(std::abs(u[0])).epsilon(1e-6));
  const auto a3 = make_subgroup(s3, std::vector<Element>{0, 3, 4});
  for (int k = 0; k < 3; ++k) {
    const auto c = verify_restrict(complex_values(6), a3);
    CHECK(c.relation == "nonincreasing");
    CHECK(c.holds);
    CHECK(c.image.norm <= c.source.norm + 1e-5);
  }
}

TEST_CASE("extension by zero") {
  const auto s3 = symmetric(3);
  const std::vector<Element> all{0, 1, 2, 3, 4, 5};
  const auto u = complex_values(6);
  CHECK(extend_zero(u, make_subgroup(s3, all)) == u);
  const auto a3 = make_subgroup(s3, std::vector<Element>{0, 3, 4});
  CHECK(extend_zero(delta(3, 0), a3) == delta(6, 0));
  CHECK(cb_norm(s3, delta(6, 0)).norm == doctest::Approx(1.0).epsilon(1e-6));
  for (int k = 0; k < 3; ++k) {
    const auto c = verify_extend(complex_values(3), a3);
    CHECK(c.relation == "equal");
    CHECK(c.holds);
    CHECK(std::abs(c.image.norm - c.source.norm) <= 1e-5);
  }
  const auto d4 = dihedral(4);
  const auto k4 = make_subgroup(d4, subgroup_closure(d4, std::vector<Element>{2, 4}));
  CHECK(verify_extend(complex_values(k4.group.order()), k4).holds);
}

TEST_CASE("lift from a quotient") {
  const auto q = quotient(cyclic(4), std::vector<Element>{0, 2});
  for (double c : {-2.0, 0.5, 3.0}) {
    const std::vector<Complex> u{1.0, c};
    const auto r = verify_lift(u, q);
    CHECK(r.holds);
    CHECK(r.image.norm == doctest::Approx(std::max(1.0, std::abs(c))).epsilon(1e-5));
  }
  const auto ones = verify_lift(std::vector<Complex>(2, 1.0), q);
  CHECK(ones.source.norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ones.image.norm == doctest::Approx(1.0).epsilon(1e-6));
  const auto trivial = quotient(dihedral(3), std::vector<Element>{0});
  const auto u = complex_values(6);
  CHECK(lift_from_quotient(u, trivial) == pullback(u, trivial.projection));
  CHECK(verify_lift(complex_values(6), trivial).holds);
}

TEST_CASE("pullback along a surjection is an isometry") {
  const auto s4 = symmetric(4);
  const auto q = quotient(s4, std::vector<Element>{0, 7, 16, 23});
  for (int k = 0; k < 2; ++k) {
    const auto c = verify_pullback(complex_values(q.group.order()), q.projection);
    CHECK(c.holds);
    CHECK(std::abs(c.image.norm - c.source.norm) <= 1e-4);
  }
  const auto inc = make_subgroup(s4, std::vector<Element>{0, 7, 16, 23}).inclusion;
  CHECK_THROWS_AS(verify_pullback(complex_values(24), inc), InputError);
}
