#include "cbnorm/groups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace cbnorm {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

}  // namespace

FiniteGroup FiniteGroup::from_cayley_table(std::vector<std::vector<std::size_t>> table,
                                           std::string name) {
  const std::size_t n = table.size();
  if (n == 0) fail("group table is empty");
  FiniteGroup g;
  g.n_ = n;
  g.name_ = std::move(name);
  g.table_.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) {
      std::ostringstream os;
      os << "group table row " << a << " has " << table[a].size() << " entries, expected " << n;
      fail(os.str());
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) {
        std::ostringstream os;
        os << "closure fails: " << a << "*" << b << " = " << table[a][b] << " is not an element";
        fail(os.str());
      }
      g.table_.push_back(table[a][b]);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (g.mul(0, a) != a || g.mul(a, 0) != a) {
      std::ostringstream os;
      os << "element 0 is not the identity (fails against element " << a << ")";
      fail(os.str());
    }
  }
  g.inverse_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (g.mul(a, b) == 0 && g.mul(b, a) == 0) {
        g.inverse_[a] = b;
        break;
      }
    if (g.inverse_[a] == n) {
      std::ostringstream os;
      os << "no inverse for element " << a;
      fail(os.str());
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = g.mul(a, b);
      for (std::size_t c = 0; c < n; ++c)
        if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) {
          std::ostringstream os;
          os << "associativity fails for (" << a << ", " << b << ", " << c << ")";
          fail(os.str());
        }
    }
  return g;
}

std::vector<std::vector<std::size_t>> FiniteGroup::cayley_table() const {
  std::vector<std::vector<std::size_t>> t(n_, std::vector<std::size_t>(n_));
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) t[a][b] = mul(a, b);
  return t;
}

std::optional<std::pair<Element, Element>> FiniteGroup::noncommuting_pair() const {
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return std::pair{a, b};
  return std::nullopt;
}

FiniteGroup cyclic(std::size_t n) {
  if (n == 0) fail("cyclic: order must be at least 1");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup::from_cayley_table(std::move(t), "cyclic(" + std::to_string(n) + ")");
}

FiniteGroup dihedral(std::size_t n) {
  if (n == 0) fail("dihedral: n must be at least 1");
  const std::size_t order = 2 * n;
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  // r^a s^e * r^b s^f = r^(a + (-1)^e b) s^(e + f)
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      const std::size_t a = x % n, e = x / n, b = y % n, f = y / n;
      const std::size_t k = e == 0 ? (a + b) % n : (a + n - b) % n;
      t[x][y] = k + n * ((e + f) % 2);
    }
  return FiniteGroup::from_cayley_table(std::move(t), "dihedral(" + std::to_string(n) + ")");
}

FiniteGroup symmetric(std::size_t n) {
  if (n == 0 || n > 5) fail("symmetric: n must be in 1..5");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = k;
  const std::size_t order = perms.size();
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  std::vector<std::size_t> c(n);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) {
      for (std::size_t x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = index.at(c);
    }
  return FiniteGroup::from_cayley_table(std::move(t), "symmetric(" + std::to_string(n) + ")");
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t ng = g.order(), nh = h.order(), order = ng * nh;
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y)
      t[x][y] = g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh);
  return FiniteGroup::from_cayley_table(std::move(t), g.name() + " x " + h.name());
}

// ---------------------------------------------------------------------------
// homomorphisms and subgroups
// ---------------------------------------------------------------------------

GroupHomomorphism::GroupHomomorphism(FiniteGroup source, FiniteGroup target, std::vector<Element> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  if (map_.size() != source_.order()) fail("homomorphism table has the wrong length");
  for (Element x : map_)
    if (x >= target_.order()) fail("homomorphism maps outside the target group");
  if (map_[0] != 0) fail("homomorphism does not send identity to identity");
  for (Element s = 0; s < source_.order(); ++s)
    for (Element t = 0; t < source_.order(); ++t)
      if (map_[source_.mul(s, t)] != target_.mul(map_[s], map_[t])) {
        std::ostringstream os;
        os << "not a homomorphism: map(" << s << "*" << t << ") != map(" << s << ")*map(" << t << ")";
        fail(os.str());
      }
}

GroupHomomorphism GroupHomomorphism::from_generators(FiniteGroup source, FiniteGroup target,
                                                     std::span<const Element> generators,
                                                     std::span<const Element> images) {
  if (generators.size() != images.size()) fail("generator and image lists differ in length");
  const std::size_t n = source.order();
  for (Element g : generators)
    if (g >= n) fail("generator is not an element of the source group");
  for (Element x : images)
    if (x >= target.order()) fail("image is not an element of the target group");
  std::vector<Element> map(n, n);
  map[0] = 0;
  std::deque<Element> queue{0};
  while (!queue.empty()) {
    const Element x = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < generators.size(); ++k) {
      const Element y = source.mul(x, generators[k]);
      const Element fy = target.mul(map[x], images[k]);
      if (map[y] == n) {
        map[y] = fy;
        queue.push_back(y);
      } else if (map[y] != fy) {
        fail("generator images do not extend to a homomorphism");
      }
    }
  }
  if (std::find(map.begin(), map.end(), n) != map.end())
    fail("generators do not generate the source group");
  return {std::move(source), std::move(target), std::move(map)};
}

bool GroupHomomorphism::surjective() const {
  std::vector<bool> hit(target_.order(), false);
  for (Element x : map_) hit[x] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

GroupHomomorphism compose(const GroupHomomorphism& outer, const GroupHomomorphism& inner) {
  if (!(inner.target() == outer.source())) fail("compose: groups do not match");
  std::vector<Element> map(inner.source().order());
  for (Element s = 0; s < map.size(); ++s) map[s] = outer(inner(s));
  return {inner.source(), outer.target(), std::move(map)};
}

std::vector<Element> subgroup_closure(const FiniteGroup& g, std::span<const Element> gens) {
  const std::size_t n = g.order();
  for (Element x : gens)
    if (x >= n) fail("subgroup_closure: generator is not an element");
  std::vector<bool> in(n, false);
  in[0] = true;
  std::deque<Element> queue{0};
  while (!queue.empty()) {
    const Element x = queue.front();
    queue.pop_front();
    for (Element s : gens) {
      const Element y = g.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  }
  // In a finite group the monoid generated by gens is already a subgroup.
  std::vector<Element> out;
  for (Element x = 0; x < n; ++x)
    if (in[x]) out.push_back(x);
  return out;
}

bool is_subgroup(const FiniteGroup& g, std::span<const Element> h) {
  std::vector<bool> in(g.order(), false);
  for (Element x : h) {
    if (x >= g.order()) return false;
    in[x] = true;
  }
  if (h.empty() || !in[0]) return false;
  for (Element a : h) {
    if (!in[g.inv(a)]) return false;
    for (Element b : h)
      if (!in[g.mul(a, b)]) return false;
  }
  return true;
}

Subgroup make_subgroup(const FiniteGroup& g, std::span<const Element> h) {
  std::vector<Element> elems(h.begin(), h.end());
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!is_subgroup(g, elems)) fail("element set is not a subgroup");
  std::vector<std::size_t> local(g.order(), 0);
  for (std::size_t k = 0; k < elems.size(); ++k) local[elems[k]] = k;
  std::vector<std::vector<std::size_t>> t(elems.size(), std::vector<std::size_t>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) t[a][b] = local[g.mul(elems[a], elems[b])];
  auto sub = FiniteGroup::from_cayley_table(std::move(t), "subgroup of " + g.name());
  GroupHomomorphism inc(sub, g, elems);
  return {std::move(sub), std::move(elems), std::move(inc)};
}

Quotient quotient(const FiniteGroup& g, std::span<const Element> normal) {
  std::vector<Element> n(normal.begin(), normal.end());
  std::sort(n.begin(), n.end());
  n.erase(std::unique(n.begin(), n.end()), n.end());
  if (!is_subgroup(g, n)) fail("quotient: element set is not a subgroup");
  std::vector<bool> in(g.order(), false);
  for (Element x : n) in[x] = true;
  for (Element s = 0; s < g.order(); ++s)
    for (Element x : n) {
      const Element c = g.mul(g.mul(s, x), g.inv(s));
      if (!in[c]) {
        std::ostringstream os;
        os << "subgroup is not normal: conjugating " << x << " by " << s << " gives " << c
           << ", which is outside it";
        fail(os.str());
      }
    }
  const std::size_t none = g.order();
  std::vector<Element> coset(g.order(), none);
  std::vector<Element> reps;
  for (Element s = 0; s < g.order(); ++s) {
    if (coset[s] != none) continue;
    for (Element x : n) coset[g.mul(s, x)] = reps.size();
    reps.push_back(s);
  }
  std::vector<std::vector<std::size_t>> t(reps.size(), std::vector<std::size_t>(reps.size()));
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b) t[a][b] = coset[g.mul(reps[a], reps[b])];
  auto q = FiniteGroup::from_cayley_table(std::move(t), g.name() + " / N");
  GroupHomomorphism proj(g, q, coset);
  return {std::move(q), std::move(proj), std::move(reps)};
}

ComplexMatrix left_regular_matrix(const FiniteGroup& g, std::span<const Complex> f) {
  const std::size_t n = g.order();
  if (f.size() != n) fail("left_regular_matrix: function length does not match group order");
  ComplexMatrix m(n, n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) m(x, y) = f[g.mul(x, g.inv(y))];
  return m;
}

GroupFunction convolve(const FiniteGroup& g, std::span<const Complex> f, std::span<const Complex> h) {
  const std::size_t n = g.order();
  if (f.size() != n || h.size() != n) fail("convolve: function length does not match group order");
  GroupFunction out(n);
  for (Element y = 0; y < n; ++y)
    for (Element x = 0; x < n; ++x) out[x] += f[y] * h[g.mul(g.inv(y), x)];
  return out;
}

GroupFunction involution(const FiniteGroup& g, std::span<const Complex> f) {
  if (f.size() != g.order()) fail("involution: function length does not match group order");
  GroupFunction out(f.size());
  for (Element t = 0; t < f.size(); ++t) out[t] = std::conj(f[g.inv(t)]);
  return out;
}

// ---------------------------------------------------------------------------
// free groups
// ---------------------------------------------------------------------------

bool is_reduced(std::span<const int> letters) {
  for (std::size_t k = 0; k + 1 < letters.size(); ++k)
    if (letters[k] == -letters[k + 1]) return false;
  return std::find(letters.begin(), letters.end(), 0) == letters.end();
}

Word::Word(std::vector<int> letters) {
  for (int x : letters) {
    if (x == 0) fail("word letter 0 is not a generator");
    if (!letters_.empty() && letters_.back() == -x) {
      letters_.pop_back();
    } else {
      letters_.push_back(x);
    }
  }
}

Word Word::parse(const std::string& s) {
  if (s == "e" || s.empty()) return {};
  std::vector<int> letters;
  for (char c : s) {
    if (c >= 'a' && c <= 'z' && c != 'e') {
      letters.push_back(c < 'e' ? c - 'a' + 1 : c - 'a');
    } else if (c >= 'A' && c <= 'Z' && c != 'E') {
      letters.push_back(-(c < 'E' ? c - 'A' + 1 : c - 'A'));
    } else {
      fail(std::string("cannot parse word '") + s + "'");
    }
  }
  return Word(std::move(letters));
}

std::string Word::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (int x : letters_) {
    // skip 'e', which denotes the identity
    int k = std::abs(x) - 1;
    if (k >= 4) ++k;
    s.push_back(static_cast<char>((x > 0 ? 'a' : 'A') + k));
  }
  return s;
}

Word Word::inverse() const {
  std::vector<int> l(letters_.rbegin(), letters_.rend());
  for (int& x : l) x = -x;
  Word w;
  w.letters_ = std::move(l);
  return w;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<int> l = a.letters_;
  l.insert(l.end(), b.letters_.begin(), b.letters_.end());
  return Word(std::move(l));
}

std::size_t FiniteSection::ball_size(std::size_t generators, std::size_t radius) {
  std::size_t total = 1, layer = 2 * generators;
  for (std::size_t k = 1; k <= radius; ++k) {
    total += layer;
    if (total > 1'000'000) return total;
    layer *= 2 * generators - 1;
  }
  return total;
}

FiniteSection::FiniteSection(std::size_t generators, std::size_t radius)
    : generators_(generators), radius_(radius) {
  if (generators == 0) fail("free_group_section: need at least one generator");
  if (generators > 25) fail("free_group_section: at most 25 generators");
  const std::size_t predicted = ball_size(generators, radius);
  if (predicted > kMaxSize) {
    std::ostringstream os;
    os << "free_group_section: ball of radius " << radius << " on " << generators
       << " generators has " << predicted << " elements (limit " << kMaxSize << ")";
    fail(os.str());
  }
  // letter order: a, A, b, B, ...
  std::vector<int> alphabet;
  for (int k = 1; k <= static_cast<int>(generators); ++k) {
    alphabet.push_back(k);
    alphabet.push_back(-k);
  }
  elements_.push_back(Word{});
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= radius; ++len) {
    const std::size_t layer_end = elements_.size();
    for (std::size_t w = layer_begin; w < layer_end; ++w)
      for (int x : alphabet) {
        const auto& l = elements_[w].letters();
        if (!l.empty() && l.back() == -x) continue;
        std::vector<int> next = l;
        next.push_back(x);
        elements_.push_back(Word(std::move(next)));
      }
    layer_begin = layer_end;
  }
  std::map<Word, std::size_t> index;
  const std::size_t n = elements_.size();
  mul_inv_.resize(n * n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      Word w = elements_[s] * elements_[t].inverse();
      auto [it, inserted] = index.try_emplace(w, products_.size());
      if (inserted) products_.push_back(std::move(w));
      mul_inv_[s * n + t] = it->second;
    }
}

bool FiniteSection::contains(const Word& w) const {
  return w.length() <= radius_ &&
         std::all_of(w.letters().begin(), w.letters().end(),
                     [this](int x) { return std::abs(x) <= static_cast<int>(generators_); });
}

}  // namespace cbnorm
