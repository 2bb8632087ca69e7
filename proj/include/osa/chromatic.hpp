#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "osa/error.hpp"
#include "osa/graph.hpp"
#include "osa/laurent.hpp"
#include "osa/manifold.hpp"
#include "osa/matrix.hpp"
#include "osa/oscomplex.hpp"
#include "osa/osalg.hpp"
#include "osa/presheaf.hpp"

namespace osa {

/// P_{M,G}(s, t) = (-1)^n s^-n t^mn chi_G(-P(M, t) s t^-m).
inline LaurentPoly2 e1_poly_closed(const ManifoldData& M, const SimpleGraph& G) {
  const int n = G.vertices(), m = M.real_dim;
  const LaurentPoly2 x = -(M.poincare() * LaurentPoly2::monomial(1, -m));
  const LaurentPoly2 sign = n % 2 ? LaurentPoly2(-1) : LaurentPoly2(1);
  return sign * LaurentPoly2::monomial(-n, m * n) * chromatic_poly_dc(G).compose_t(x);
}

/// Sum over the bond lattice of dim A_p t^{m r(p)} P(M, t)^{|p|} s^{-r(p)}.
inline LaurentPoly2 e1_poly_direct(const ManifoldData& M, const SimpleGraph& G,
                                   std::size_t max_elements = kDefaultMaxElements) {
  const BondLattice B = bond_lattice(G, max_elements);
  const OSAlgebra A = OSAlgebra::of_lattice(B.lattice, B.atom_order);
  const LaurentPoly2 P = M.poincare();
  LaurentPoly2 out;
  for (std::size_t p = 0; p < B.lattice.size(); ++p) {
    const Partition& part = B.partitions[p];
    out += LaurentPoly2::monomial(-part.rank(), M.real_dim * part.rank(), static_cast<long>(A.dim(p))) *
           P.pow(part.block_count());
  }
  return out;
}

inline void require_zero_diagonal_gf2(const ManifoldData& M, const std::string& what) {
  if (M.field != FieldTag::GF2) throw ValidationError(what + " requires a GF2 manifold");
  if (!M.zero_diagonal) throw ValidationError(what + " requires zero_diagonal to be asserted");
}

/// Z/2 Poincare polynomial (-1)^n t^{n(m-1)} chi_G(-P(M) t^{1-m}).
inline LaurentPoly2 poincare_z2(const ManifoldData& M, const SimpleGraph& G) {
  require_zero_diagonal_gf2(M, "poincare_z2");
  const int n = G.vertices(), m = M.real_dim;
  const LaurentPoly2 x = -(M.poincare() * LaurentPoly2::t_pow(1 - m));
  const LaurentPoly2 sign = n % 2 ? LaurentPoly2(-1) : LaurentPoly2(1);
  return sign * LaurentPoly2::t_pow(n * (m - 1)) * chromatic_poly_dc(G).compose_t(x);
}

/// chi(F(M, G)) = chi_G(chi(M)) for even m. For odd m the value is
/// (-1)^n chi_G(-chi(M)), which agrees when M is closed.
inline mpz_class euler_char(const ManifoldData& M, const SimpleGraph& G) {
  const long chi = M.euler_characteristic();
  if (M.real_dim % 2 == 0) return chromatic_poly_dc(G).evaluate(1, chi).get_num();
  const mpz_class v = chromatic_poly_dc(G).evaluate(1, -chi).get_num();
  return G.vertices() % 2 ? mpz_class(-v) : v;
}

/// Simple cycles of G, each as its edge list, found once per vertex set and
/// direction by starting from the smallest vertex.
inline std::vector<std::vector<Edge>> simple_cycles(const SimpleGraph& G) {
  const int n = G.vertices();
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : G.edges()) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<std::vector<Edge>> out;
  std::vector<int> path;
  std::vector<bool> used(n, false);
  auto close = [&] {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const int a = path[k], b = path[(k + 1) % path.size()];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    out.push_back(std::move(edges));
  };
  auto dfs = [&](auto&& self, int v) -> void {
    for (int w : adj[v]) {
      if (w == path.front() && path.size() >= 3 && path[1] < path.back()) close();
      if (w <= path.front() || used[w]) continue;
      used[w] = true;
      path.push_back(w);
      self(self, w);
      path.pop_back();
      used[w] = false;
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    dfs(dfs, s);
  }
  return out;
}

/// E(M, G)/I over GF(2): the exterior algebra on edge generators over
/// H*(M)^{(x) n} modulo the diagonal relations and the cycle relations.
struct PresentationEMG {
  std::size_t base_dim = 0;
  std::vector<Edge> generators;
  std::size_t diagonal_relations = 0;
  std::vector<std::vector<Edge>> cycles;
  /// (number of edge generators, base degree) -> dimension of the quotient
  std::map<std::pair<int, int>, std::size_t> dims;
  int real_dim = 0;

  /// Sum of dim t^{base degree + k (m - 1)}.
  LaurentPoly2 poincare() const {
    LaurentPoly2 out;
    for (const auto& [key, d] : dims)
      out += LaurentPoly2::monomial(0, key.second + key.first * (real_dim - 1), static_cast<long>(d));
    return out;
  }

  /// Sum of dim s^-k t^{base degree + k m}.
  LaurentPoly2 two_variable() const {
    LaurentPoly2 out;
    for (const auto& [key, d] : dims)
      out += LaurentPoly2::monomial(-key.first, key.second + key.first * real_dim, static_cast<long>(d));
    return out;
  }

  /// Dimensions by number of edge generators.
  std::vector<std::size_t> edge_degree_dims() const {
    std::vector<std::size_t> out;
    for (const auto& [key, d] : dims) {
      if (static_cast<std::size_t>(key.first) >= out.size()) out.resize(key.first + 1, 0);
      out[key.first] += d;
    }
    return out;
  }
};

inline PresentationEMG presentation(const ManifoldData& M, const SimpleGraph& G) {
  if (M.field != FieldTag::GF2) throw ValidationError("presentation requires a GF2 manifold");
  const CohomologyRing<Gf2> ring(M);
  const int n = G.vertices();
  const TensorPower<Gf2> base(ring, n);
  const auto& edges = G.edges();
  if (edges.size() > 12) throw SizeGuardError("presentation supports at most 12 edges");
  const std::uint32_t all_edges = (1u << edges.size()) - 1;

  auto edge_index = [&](Edge e) {
    return static_cast<std::size_t>(std::find(edges.begin(), edges.end(), e) - edges.begin());
  };
  // a bucket is (flat label, edge count, base degree); relations are homogeneous in all three
  auto flat_of = [&](std::uint32_t S) {
    std::vector<int> id(n);
    for (int v = 0; v < n; ++v) id[v] = v;
    auto find = [&](int v) {
      while (id[v] != v) v = id[v] = id[id[v]];
      return v;
    };
    for (std::uint32_t r = S; r; r &= r - 1) {
      const auto [a, b] = edges[std::countr_zero(r)];
      id[find(a)] = find(b);
    }
    for (int v = 0; v < n; ++v) id[v] = find(v);
    return Partition::from_block_ids(id).label();
  };
  using Key = std::tuple<std::string, int, int>;
  std::map<Key, std::vector<std::pair<std::size_t, std::uint32_t>>> buckets;
  std::map<std::uint32_t, std::string> flat_cache;
  for (std::uint32_t S = 0;; ++S) {
    flat_cache[S] = flat_of(S);
    for (std::size_t a = 0; a < base.size(); ++a)
      buckets[{flat_cache[S], std::popcount(S), base.degree(a)}].push_back({a, S});
    if (S == all_edges) break;
  }
  std::map<Key, std::map<std::pair<std::size_t, std::uint32_t>, std::size_t>> position;
  std::map<Key, SpanReducer<Gf2>> spans;
  for (const auto& [key, list] : buckets) {
    auto& pos = position[key];
    for (std::size_t k = 0; k < list.size(); ++k) pos[list[k]] = k;
    spans.try_emplace(key, list.size());
  }
  // adds sum of terms (a, S) to the ideal span of its bucket
  auto add_relation = [&](const std::map<std::pair<std::size_t, std::uint32_t>, Gf2>& terms) {
    if (terms.empty()) return;
    const auto& [a0, S0] = terms.begin()->first;
    const Key key{flat_cache.at(S0), std::popcount(S0), base.degree(a0)};
    Vector<Gf2> v(buckets.at(key).size());
    for (const auto& [term, c] : terms) v[position.at(key).at(term)] += c;
    spans.at(key).add(v);
  };
  auto toggle = [](std::map<std::pair<std::size_t, std::uint32_t>, Gf2>& terms, std::pair<std::size_t, std::uint32_t> t,
                   Gf2 c) {
    if (c == Gf2(0)) return;
    auto [it, fresh] = terms.try_emplace(t, c);
    if (!fresh) {
      it->second += c;
      if (it->second == Gf2(0)) terms.erase(it);
    }
  };

  PresentationEMG out;
  out.base_dim = base.size();
  out.generators = edges;
  out.real_dim = M.real_dim;
  out.cycles = simple_cycles(G);

  // type (1): (x_i - x_j) e_ij, times every a e_T
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    const std::uint32_t ebit = 1u << e;
    for (std::size_t x = 0; x < ring.dim(); ++x) {
      if (x == ring.unit()) continue;
      ++out.diagonal_relations;
      for (std::size_t a = 0; a < base.size(); ++a)
        for (std::uint32_t T = 0;; ++T) {
          if (!(T & ebit)) {
            std::map<std::pair<std::size_t, std::uint32_t>, Gf2> terms;
            for (const auto& [k, c] : base.multiply(a, base.place(i, x))) toggle(terms, {k, T | ebit}, c);
            for (const auto& [k, c] : base.multiply(a, base.place(j, x))) toggle(terms, {k, T | ebit}, c);
            add_relation(terms);
          }
          if (T == all_edges) break;
        }
    }
  }
  // type (2): sum over s of the cycle with edge s removed, times every a e_T
  for (const auto& cycle : out.cycles) {
    std::uint32_t C = 0;
    for (const auto& e : cycle) C |= 1u << edge_index(e);
    for (std::size_t a = 0; a < base.size(); ++a)
      for (std::uint32_t T = 0;; ++T) {
        std::map<std::pair<std::size_t, std::uint32_t>, Gf2> terms;
        for (std::uint32_t r = C; r; r &= r - 1) {
          const std::uint32_t face = C & ~(r & -r);
          if (!(face & T)) toggle(terms, {a, face | T}, Gf2(1));
        }
        add_relation(terms);
        if (T == all_edges) break;
      }
  }
  for (const auto& [key, list] : buckets) {
    const std::size_t d = list.size() - spans.at(key).rank();
    if (d) out.dims[{std::get<1>(key), std::get<2>(key)}] += d;
  }
  return out;
}

/// Both hypotheses of the algebra theorem: zero diagonal class and
/// H^i(M) = 0 for every i >= (m - 1) / 2.
inline Verdict check_thm_alg(const ManifoldData& M) {
  if (M.field != FieldTag::GF2) return Verdict::failure("manifold data is not over GF2");
  bool zero = M.zero_diagonal || !M.diagonal_class;
  if (!zero) zero = !CohomologyRing<Gf2>(M).has_diagonal();
  if (!zero) return Verdict::failure("diagonal class is nonzero");
  const auto b = M.betti();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (2 * static_cast<int>(i) >= M.real_dim - 1 && b[i] != 0)
      return Verdict::failure("H^" + std::to_string(i) + "(M) is nonzero");
  return {};
}

/// E2 page of the diagonal presheaf complex with products and a collapse label.
template <class F>
E2Page<F> chromatic_page(const ManifoldData& M, const SimpleGraph& G, std::size_t max_elements = kDefaultMaxElements) {
  auto D = diagonal_presheaf<F>(M, G, max_elements);
  const OSComplex<F> K(std::make_shared<const Presheaf<F>>(std::move(D.presheaf)), D.bond->atom_order);
  E2Page<F> page = e2_ring(K);
  const bool zero_differential = M.zero_diagonal || !D.ring->has_diagonal();
  if (FieldTraits<F>::tag == FieldTag::GF2 && zero_differential) {
    page.collapse = "guaranteed";
  } else if (FieldTraits<F>::tag == FieldTag::Q && M.projective_complex) {
    page.collapse = "guaranteed";
    page.weights = true;
  } else if (dg1_generation_check(page)) {
    page.collapse = "detected";
  }
  return page;
}

/// Rational Betti numbers of F(M, G) for a complex projective M.
inline E2Page<Rational> betti_projective(const ManifoldData& M, const SimpleGraph& G,
                                         std::size_t max_elements = kDefaultMaxElements) {
  if (M.field != FieldTag::Q) throw ValidationError("betti_projective requires a manifold over Q");
  if (!M.projective_complex) throw ValidationError("betti_projective requires projective_complex");
  if (!M.diagonal_class) throw ValidationError("betti_projective requires a diagonal_class");
  return chromatic_page<Rational>(M, G, max_elements);
}

}  // namespace osa
