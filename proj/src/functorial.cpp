#include "cbnorm/functorial.hpp"

#include <cmath>
#include <sstream>

namespace cbnorm {

namespace {

void check_length(std::span<const Complex> u, std::size_t n, const char* what) {
  if (u.size() != n) {
    std::ostringstream os;
    os << what << ": function has " << u.size() << " values, expected " << n;
    throw InputError(os.str());
  }
}

NormComparison compare(std::string relation, NormReport source, NormReport image, double tolerance) {
  NormComparison c{std::move(relation), std::move(source), std::move(image), tolerance, false};
  const double d = c.image.norm - c.source.norm;
  c.holds = c.relation == "equal" ? std::abs(d) <= tolerance : d <= tolerance;
  return c;
}

}  // namespace

GroupFunction pullback(std::span<const Complex> u, const GroupHomomorphism& sigma) {
  check_length(u, sigma.target().order(), "pullback");
  GroupFunction out(sigma.source().order());
  for (Element s = 0; s < out.size(); ++s) out[s] = u[sigma(s)];
  return out;
}

GroupFunction restrict(std::span<const Complex> u, const Subgroup& h) {
  check_length(u, h.inclusion.target().order(), "restrict");
  GroupFunction out(h.elements.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = u[h.elements[k]];
  return out;
}

GroupFunction extend_zero(std::span<const Complex> u, const Subgroup& h) {
  check_length(u, h.elements.size(), "extend_zero");
  GroupFunction out(h.inclusion.target().order());
  for (std::size_t k = 0; k < u.size(); ++k) out[h.elements[k]] = u[k];
  return out;
}

GroupFunction lift_from_quotient(std::span<const Complex> u, const Quotient& q) {
  return pullback(u, q.projection);
}

NormComparison verify_pullback(std::span<const Complex> u, const GroupHomomorphism& sigma,
                               double tolerance, const sdp::Tolerances& tol) {
  if (!sigma.surjective()) throw InputError("verify_pullback: homomorphism is not onto");
  const auto image = pullback(u, sigma);
  return compare("equal", cb_norm(sigma.target(), u, tol), cb_norm(sigma.source(), image, tol),
                 tolerance);
}

NormComparison verify_restrict(std::span<const Complex> u, const Subgroup& h, double tolerance,
                               const sdp::Tolerances& tol) {
  const auto image = restrict(u, h);
  return compare("nonincreasing", cb_norm(h.inclusion.target(), u, tol), cb_norm(h.group, image, tol),
                 tolerance);
}

NormComparison verify_extend(std::span<const Complex> u, const Subgroup& h, double tolerance,
                             const sdp::Tolerances& tol) {
  const auto image = extend_zero(u, h);
  return compare("equal", cb_norm(h.group, u, tol), cb_norm(h.inclusion.target(), image, tol),
                 tolerance);
}

NormComparison verify_lift(std::span<const Complex> u, const Quotient& q, double tolerance,
                           const sdp::Tolerances& tol) {
  return verify_pullback(u, q.projection, tolerance, tol);
}

}  // namespace cbnorm
