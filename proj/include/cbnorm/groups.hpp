#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbnorm/linalg.hpp"

namespace cbnorm {

using Element = std::size_t;

/// Finite group given by its Cayley table. Element 0 is the identity.
/// Haar measure is counting measure throughout.
class FiniteGroup {
 public:
  /// Validates closure, identity at 0, inverses and associativity.
  static FiniteGroup from_cayley_table(std::vector<std::vector<std::size_t>> table,
                                       std::string name = "table");

  std::size_t order() const noexcept { return n_; }
  Element identity() const noexcept { return 0; }
  Element mul(Element a, Element b) const { return table_[a * n_ + b]; }
  Element inv(Element a) const { return inverse_[a]; }
  const std::string& name() const noexcept { return name_; }

  std::vector<std::vector<std::size_t>> cayley_table() const;
  bool is_abelian() const { return !noncommuting_pair().has_value(); }
  std::optional<std::pair<Element, Element>> noncommuting_pair() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.n_ == b.n_ && a.table_ == b.table_;
  }

 private:
  FiniteGroup() = default;

  std::size_t n_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::string name_;
};

FiniteGroup cyclic(std::size_t n);
/// Dihedral group of order 2n; element k + n*e stands for r^k s^e.
FiniteGroup dihedral(std::size_t n);
/// Permutations of {0..n-1} in lexicographic order, (p*q)(x) = p(q(x)); n <= 5.
FiniteGroup symmetric(std::size_t n);
/// (g, h) is labelled g*|H| + h.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

class GroupHomomorphism {
 public:
  /// Validates map(s*t) = map(s)*map(t) for all pairs.
  GroupHomomorphism(FiniteGroup source, FiniteGroup target, std::vector<Element> map);

  /// Extends generator images multiplicatively; fails if the images do not
  /// define a homomorphism or the generators do not generate the source.
  static GroupHomomorphism from_generators(FiniteGroup source, FiniteGroup target,
                                           std::span<const Element> generators,
                                           std::span<const Element> images);

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  Element operator()(Element s) const { return map_[s]; }
  const std::vector<Element>& table() const noexcept { return map_; }
  bool surjective() const;

 private:
  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<Element> map_;
};

/// outer o inner
GroupHomomorphism compose(const GroupHomomorphism& outer, const GroupHomomorphism& inner);

/// Smallest subgroup containing gens, sorted ascending.
std::vector<Element> subgroup_closure(const FiniteGroup& g, std::span<const Element> gens);

bool is_subgroup(const FiniteGroup& g, std::span<const Element> h);

struct Subgroup {
  FiniteGroup group;              // relabelled, identity first
  std::vector<Element> elements;  // elements[k] is the ambient label of k
  GroupHomomorphism inclusion;
};

/// Throws InputError if h is not a subgroup.
Subgroup make_subgroup(const FiniteGroup& g, std::span<const Element> h);

struct Quotient {
  FiniteGroup group;
  GroupHomomorphism projection;
  /// Smallest ambient element of each coset.
  std::vector<Element> representatives;
};

/// G/N for a normal subgroup N; cosets are numbered by first appearance.
Quotient quotient(const FiniteGroup& g, std::span<const Element> normal);

using GroupFunction = std::vector<Complex>;

/// Convolution matrix on l^2(G): M[x, y] = f(x y^{-1}).
ComplexMatrix left_regular_matrix(const FiniteGroup& g, std::span<const Complex> f);

/// (f * h)(x) = sum_y f(y) h(y^{-1} x)
GroupFunction convolve(const FiniteGroup& g, std::span<const Complex> f, std::span<const Complex> h);

/// f*(t) = conj f(t^{-1})
GroupFunction involution(const FiniteGroup& g, std::span<const Complex> f);

// ---------------------------------------------------------------------------
// free groups
// ---------------------------------------------------------------------------

/// Word in a free group. Letters are +k / -k for generator k (1-based).
class Word {
 public:
  Word() = default;
  /// Reduces on construction.
  explicit Word(std::vector<int> letters);

  static Word parse(const std::string& s);

  const std::vector<int>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  Word inverse() const;
  /// Generators print as a, b, c, ...; inverses as A, B, C, ...; identity as e.
  std::string str() const;

  friend Word operator*(const Word& a, const Word& b);
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

/// True if no adjacent letters cancel.
bool is_reduced(std::span<const int> letters);

/// Ball of radius k in the free group on m generators, with the reduced
/// products s t^{-1} for every pair of section elements.
class FiniteSection {
 public:
  static constexpr std::size_t kMaxSize = 500;

  FiniteSection(std::size_t generators, std::size_t radius);

  std::size_t generators() const noexcept { return generators_; }
  std::size_t radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Word>& elements() const noexcept { return elements_; }
  /// Distinct words of the form s t^{-1}; may lie outside the ball.
  const std::vector<Word>& products() const noexcept { return products_; }
  /// Index into products() of s t^{-1}.
  std::size_t mul_inv(std::size_t s, std::size_t t) const { return mul_inv_[s * size() + t]; }
  bool contains(const Word& w) const;

  /// Predicted ball size 1 + 2m((2m-1)^k - 1)/(2m-2) (or 2k+1 when m = 1).
  static std::size_t ball_size(std::size_t generators, std::size_t radius);

 private:
  std::size_t generators_;
  std::size_t radius_;
  std::vector<Word> elements_;
  std::vector<Word> products_;
  std::vector<std::size_t> mul_inv_;
};

}  // namespace cbnorm
