#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "osa/error.hpp"
#include "osa/field.hpp"
#include "osa/matrix.hpp"
#include "osa/poset.hpp"

namespace osa {

using Mask = std::uint64_t;

/// Integer linear combination of monomials.
using IntCombo = std::map<Mask, long long>;

template <class F>
using OSElement = std::map<Mask, F>;

namespace detail {

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in Orlik-Solomon coefficient");
  return r;
}

inline void accumulate(IntCombo& into, Mask m, long long c) {
  if (c == 0) return;
  auto [it, fresh] = into.try_emplace(m, c);
  if (!fresh) {
    if (__builtin_add_overflow(it->second, c, &it->second)) throw Error("integer overflow in Orlik-Solomon coefficient");
    if (it->second == 0) into.erase(it);
  }
}

/// Sign of e_X e_Y = sign * e_{X u Y} for disjoint X, Y.
inline int merge_sign(Mask x, Mask y) {
  int inversions = 0;
  while (x) {
    const int bit = std::countr_zero(x);
    inversions += std::popcount(y & ((Mask{1} << bit) - 1));
    x &= x - 1;
  }
  return inversions % 2 ? -1 : 1;
}

}  // namespace detail

/// Orlik-Solomon algebra of the geometric lattice [0, top] inside a poset,
/// with its no-broken-circuit basis. Monomials are bit masks over the atoms
/// below top, listed in the given global atom order. The poset must outlive
/// the algebra.
class OSAlgebra {
 public:
  OSAlgebra(const RankedPoset& P, std::size_t top, const std::vector<std::size_t>& atom_order)
      : poset_(&P), top_(top), cache_(std::make_unique<Cache>()) {
    const auto bot = P.bottom();
    if (!bot) throw ValidationError("Orlik-Solomon algebra: poset has no minimum");
    bottom_ = *bot;
    for (std::size_t a : atom_order) {
      if (P.rank(a) != 1) throw ValidationError("atom order lists a non-atom: " + P.label(a));
      if (P.leq(a, top)) atoms_.push_back(a);
    }
    std::size_t below = 0;
    for (std::size_t a : P.atoms()) below += P.leq(a, top);
    if (below != atoms_.size()) throw ValidationError("atom order does not list every atom below " + P.label(top));
    if (atoms_.size() > 64) throw SizeGuardError("Orlik-Solomon algebra supports at most 64 atoms");
    enumerate(0, bottom_);
    for (auto& [grade, list] : basis_) std::sort(list.begin(), list.end(), mask_order);
  }

  static OSAlgebra of_lattice(const GeometricLattice& L) { return OSAlgebra(L.poset(), L.top(), L.atoms()); }
  static OSAlgebra of_lattice(const GeometricLattice& L, const std::vector<std::size_t>& atom_order) {
    return OSAlgebra(L.poset(), L.top(), atom_order);
  }

  const RankedPoset& poset() const { return *poset_; }
  std::size_t top() const { return top_; }
  const std::vector<std::size_t>& atoms() const { return atoms_; }

  /// NBC monomials of grade p (empty for p not below top).
  const std::vector<Mask>& basis(std::size_t p) const {
    static const std::vector<Mask> none;
    auto it = basis_.find(p);
    return it == basis_.end() ? none : it->second;
  }
  std::size_t dim(std::size_t p) const { return basis(p).size(); }
  const std::map<std::size_t, std::vector<Mask>>& basis_by_grade() const { return basis_; }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& [p, list] : basis_) n += list.size();
    return n;
  }

  /// Position of an NBC monomial within basis(grade(m)).
  std::size_t basis_index(Mask m) const {
    const auto& list = basis(grade(m));
    auto it = std::lower_bound(list.begin(), list.end(), m, mask_order);
    if (it == list.end() || *it != m) throw Error("monomial is not in the NBC basis");
    return static_cast<std::size_t>(it - list.begin());
  }

  /// Join of the atoms in m, computed inside [0, top].
  std::size_t grade(Mask m) const {
    if (m == 0) return bottom_;
    Bits acc = poset_->down(top_);
    for (Mask r = m; r; r &= r - 1) acc &= poset_->up(atoms_[std::countr_zero(r)]);
    const std::size_t first = acc.find_first();
    if (first == Bits::npos) throw Error("atoms have no join below top");
    return first;
  }

  bool independent(Mask m) const { return poset_->rank(grade(m)) == std::popcount(m); }

  bool is_nbc(Mask m) const {
    if (!independent(m)) return false;
    for (Mask suffix = m; suffix; suffix &= suffix - 1) {
      const int head = std::countr_zero(suffix);
      const std::size_t g = grade(suffix);
      for (int b = 0; b < head; ++b)
        if (poset_->leq(atoms_[b], g)) return false;
    }
    return true;
  }

  /// Normal form of the monomial e_m (atoms in increasing order).
  IntCombo reduce(Mask m) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      if (auto it = cache_->normal_form.find(m); it != cache_->normal_form.end()) return it->second;
    }
    IntCombo out = reduce_uncached(m);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->normal_form.emplace(m, out);
    return out;
  }

  /// Product of two basis monomials in normal form.
  IntCombo mul(Mask x, Mask y) const {
    if (x & y) return {};
    if (poset_->rank(grade(x | y)) < std::popcount(x) + std::popcount(y)) return {};
    IntCombo out = reduce(x | y);
    if (detail::merge_sign(x, y) < 0)
      for (auto& [k, c] : out) c = -c;
    return out;
  }

  /// Boundary of a monomial; faces of NBC sets are NBC, so no rewriting.
  IntCombo boundary(Mask m) const {
    IntCombo out;
    int j = 0;
    for (Mask r = m; r; r &= r - 1, ++j) {
      const Mask face = m & ~(r & -r);
      detail::accumulate(out, face, j % 2 ? -1 : 1);
    }
    return out;
  }

  template <class F>
  OSElement<F> mul(const OSElement<F>& x, const OSElement<F>& y) const {
    OSElement<F> out;
    for (const auto& [mx, cx] : x)
      for (const auto& [my, cy] : y)
        for (const auto& [m, c] : mul(mx, my)) add_to(out, m, F(cx * cy * from_int<F>(c)));
    return out;
  }

  template <class F>
  OSElement<F> boundary(const OSElement<F>& x) const {
    OSElement<F> out;
    for (const auto& [mx, cx] : x)
      for (const auto& [m, c] : boundary(mx)) add_to(out, m, F(cx * from_int<F>(c)));
    return out;
  }

  template <class F>
  static OSElement<F> to_field(const IntCombo& combo) {
    OSElement<F> out;
    for (const auto& [m, c] : combo) add_to(out, m, from_int<F>(c));
    return out;
  }

  /// Global atom elements of a monomial, in atom order.
  std::vector<std::size_t> atoms_of(Mask m) const {
    std::vector<std::size_t> out;
    for (Mask r = m; r; r &= r - 1) out.push_back(atoms_[std::countr_zero(r)]);
    return out;
  }
  std::vector<int> positions_of(Mask m) const {
    std::vector<int> out;
    for (Mask r = m; r; r &= r - 1) out.push_back(std::countr_zero(r));
    return out;
  }

  std::string monomial_string(Mask m) const {
    if (m == 0) return "1";
    std::string s;
    for (int k : positions_of(m)) s += "e" + std::to_string(k);
    return s;
  }

  /// Orders monomials by degree, then as increasing atom sequences.
  static bool mask_order(Mask a, Mask b) {
    const int da = std::popcount(a), db = std::popcount(b);
    if (da != db) return da < db;
    while (a && b) {
      const int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return false;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::unordered_map<Mask, IntCombo> normal_form;
  };

  template <class F>
  static void add_to(OSElement<F>& out, Mask m, const F& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = out.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (is_zero(it->second)) out.erase(it);
    }
  }

  // Grows NBC sets by prepending atoms smaller than the current minimum.
  void enumerate(Mask m, std::size_t g) {
    basis_[g].push_back(m);
    const int upper = m ? std::countr_zero(m) : static_cast<int>(atoms_.size());
    for (int a = 0; a < upper; ++a) {
      const Mask next = m | (Mask{1} << a);
      if (is_nbc(next)) enumerate(next, grade(next));
    }
  }

  IntCombo reduce_uncached(Mask m) const {
    if (!independent(m)) return {};
    // find a position whose suffix join lies above a smaller atom
    Mask suffix_hit = 0;
    int broken = -1;
    for (Mask suffix = m; suffix && broken < 0; suffix &= suffix - 1) {
      const int head = std::countr_zero(suffix);
      const std::size_t g = grade(suffix);
      for (int b = 0; b < head; ++b)
        if (poset_->leq(atoms_[b], g)) {
          broken = b;
          suffix_hit = suffix;
          break;
        }
    }
    if (broken < 0) return {{m, 1}};
    const Mask bmask = Mask{1} << broken;
    // shrink to a minimal T with b below its join, making T + b a circuit
    Mask t = suffix_hit;
    for (Mask r = suffix_hit; r; r &= r - 1) {
      const Mask trial = t & ~(r & -r);
      if (trial && poset_->leq(atoms_[broken], grade(trial))) t = trial;
    }
    const Mask rest = m & ~t;
    const int outer = detail::merge_sign(t, rest);
    // e_T = sum_{i>=1} (-1)^{i+1} e_{C - c_i} for the circuit C = (b, c_1, ..., c_r)
    IntCombo out;
    int i = 1;
    for (Mask r = t; r; r &= r - 1, ++i) {
      const Mask face = (t & ~(r & -r)) | bmask;
      if (face & rest) continue;
      const int sign = outer * (i % 2 ? 1 : -1) * detail::merge_sign(face, rest);
      for (const auto& [k, c] : reduce(face | rest)) detail::accumulate(out, k, detail::checked_mul(sign, c));
    }
    return out;
  }

  const RankedPoset* poset_;
  std::size_t top_;
  std::size_t bottom_ = 0;
  std::vector<std::size_t> atoms_;
  std::map<std::size_t, std::vector<Mask>> basis_;
  std::unique_ptr<Cache> cache_;
};

/// Dimension of the degree r(p), grade p part of the exterior algebra modulo
/// the relations, by direct elimination over F.
template <class F>
std::size_t os_dim_oracle(const RankedPoset& P, std::size_t p, const std::vector<std::size_t>& atom_order) {
  std::vector<std::size_t> below;
  for (std::size_t a : atom_order)
    if (P.leq(a, p)) below.push_back(a);
  if (below.size() > 24) throw SizeGuardError("os_dim_oracle: too many atoms for brute force");
  const int r = P.rank(p);
  auto join_of = [&](Mask m) {
    Bits acc = P.down(p);
    for (Mask x = m; x; x &= x - 1) acc &= P.up(below[std::countr_zero(x)]);
    return acc.find_first();
  };
  const auto bot = *P.bottom();
  std::map<Mask, std::size_t> generator;
  std::vector<Mask> dependent;
  const Mask full = below.size() == 64 ? ~Mask{0} : (Mask{1} << below.size()) - 1;
  for (Mask m = 0;; ++m) {
    const int k = std::popcount(m);
    const std::size_t g = m ? join_of(m) : bot;
    if (k == r && g == p) generator.emplace(m, generator.size());
    if (k == r + 1 && P.rank(g) < k) dependent.push_back(m);
    if (m == full) break;
  }
  std::vector<Vector<F>> relations;
  for (Mask t : dependent) {
    Vector<F> v(generator.size(), F(0));
    bool any = false;
    int j = 0;
    for (Mask x = t; x; x &= x - 1, ++j) {
      auto it = generator.find(t & ~(x & -x));
      if (it == generator.end()) continue;
      v[it->second] += from_int<F>(j % 2 ? -1 : 1);
      any = true;
    }
    if (any) relations.push_back(std::move(v));
  }
  if (relations.empty()) return generator.size();
  return generator.size() - rank(Matrix<F>::from_rows(relations, generator.size()));
}

struct ExactnessVerdict {
  bool exact = true;
  std::vector<std::size_t> homology;  // by degree
};

/// Homology of (A*([0, top]), boundary) over F.
template <class F>
ExactnessVerdict exactness_check(const OSAlgebra& A) {
  const int top_rank = A.poset().rank(A.top());
  std::vector<std::vector<Mask>> by_degree(top_rank + 1);
  for (const auto& [g, list] : A.basis_by_grade())
    for (Mask m : list) by_degree[std::popcount(m)].push_back(m);
  for (auto& list : by_degree) std::sort(list.begin(), list.end(), OSAlgebra::mask_order);
  auto index_in = [&](int deg, Mask m) {
    const auto& list = by_degree[deg];
    return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), m, OSAlgebra::mask_order) - list.begin());
  };
  // ranks[k] = rank of boundary from degree k to k-1
  std::vector<std::size_t> ranks(top_rank + 2, 0);
  for (int k = 1; k <= top_rank; ++k) {
    Matrix<F> d(by_degree[k - 1].size(), by_degree[k].size());
    for (std::size_t c = 0; c < by_degree[k].size(); ++c)
      for (const auto& [m, coeff] : A.boundary(by_degree[k][c])) d(index_in(k - 1, m), c) += from_int<F>(coeff);
    ranks[k] = rank(d);
  }
  ExactnessVerdict v;
  for (int k = 0; k <= top_rank; ++k) {
    const std::size_t h = by_degree[k].size() - ranks[k] - ranks[k + 1];
    v.homology.push_back(h);
    if (h != 0) v.exact = false;
  }
  return v;
}

}  // namespace osa
