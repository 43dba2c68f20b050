#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbnorm/groups.hpp"
#include "cbnorm/schur.hpp"

namespace cbnorm {

/// A Schur symbol on G x G satisfying U(sr, t) = U(s, t r^{-1}).
struct InvariantSchurMatrix {
  ComplexMatrix matrix;
};

/// Multiplier on a free group, evaluated on words. Returning nullopt marks a
/// word where the multiplier is not defined.
using WordFunction = std::function<std::optional<Complex>(const Word&)>;

/// Looks words up in a table; words not in the table are undefined.
WordFunction word_table(std::map<Word, Complex> values);

/// Built-in families: "decay:r" gives r^|x|, "indicator:w1,w2,.." the indicator
/// of the listed words, "random:seed" real values in [-1, 1] and
/// "crandom:seed" complex values with parts in [-1, 1]. Random values depend
/// only on the word and the seed, so nested sections see the same function.
WordFunction word_family(const std::string& spec);

/// U(s, t) = u(s t^{-1})
InvariantSchurMatrix herz_schur_matrix(const FiniteGroup& g, std::span<const Complex> u);
ComplexMatrix herz_schur_matrix(const FiniteSection& f, const WordFunction& u);

/// Multiplier norm of u, i.e. the Schur norm of its Herz-Schur matrix.
NormReport cb_norm(const FiniteGroup& g, std::span<const Complex> u, const sdp::Tolerances& tol = {});

/// Section version; the value is a lower bound for the norm on the free group.
NormReport cb_norm(const FiniteSection& f, const WordFunction& u, const sdp::Tolerances& tol = {});

/// One report per section. Sections must be nested (same generators,
/// nondecreasing radius).
std::vector<NormReport> cb_norm_sections(const std::vector<FiniteSection>& sections,
                                         const WordFunction& u, const sdp::Tolerances& tol = {});

/// max over r, s, t of |U(sr, t) - U(s, t r^{-1})|
double invariance_check(const ComplexMatrix& u, const FiniteGroup& g);

/// Mean of U over each orbit {(s r, t r)}; the result is exactly invariant and
/// projecting twice changes nothing.
InvariantSchurMatrix average_project(const ComplexMatrix& u, const FiniteGroup& g);

/// u(t) = U(t, e), after checking every row agrees to 1e-12.
GroupFunction multiplier_from_invariant(const ComplexMatrix& u, const FiniteGroup& g);

/// Fourier algebra norm: min ||M||_1 subject to p_map(M) = u. The optimal M is
/// returned as the kernel. For finite groups this is also the B(G) norm.
NormReport a_norm(const FiniteGroup& g, std::span<const Complex> u, const sdp::Tolerances& tol = {});

/// (PM)(t) = sum_s M(s, t^{-1} s)
GroupFunction p_map(const ComplexMatrix& m, const FiniteGroup& g);

}  // namespace cbnorm
