#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "osa/catalog.hpp"
#include "osa/chromatic.hpp"
#include "osa/graph.hpp"
#include "osa/hyperplane.hpp"
#include "osa/oscomplex.hpp"

namespace osa {

struct CheckOptions {
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Counts cases and keeps the first failure.
class Tally {
 public:
  void expect(bool ok, const std::function<std::string()>& what) {
    ++cases_;
    if (!ok && failure_.empty()) failure_ = what();
  }

  void expect(const Verdict& v, const std::function<std::string()>& what) {
    expect(v.ok, [&] { return what() + ": " + v.certificate; });
  }

  void fail(const std::string& why) { expect(false, [&] { return why; }); }

  bool passed() const { return failure_.empty(); }
  std::size_t cases() const { return cases_; }
  const std::string& failure() const { return failure_; }

 private:
  std::size_t cases_ = 0;
  std::string failure_;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline std::string poly(const LaurentPoly2& p) { return p.to_string(); }

inline std::string time_limit_failure(double seconds, double limit) {
  std::ostringstream os;
  os.precision(3);
  os << "took " << seconds << " s, limit " << limit << " s";
  return os.str();
}

inline std::shared_ptr<const RankedPoset> shared_poset(RankedPoset P) {
  return std::make_shared<const RankedPoset>(std::move(P));
}

inline std::shared_ptr<const RankedPoset> bond_poset(const SimpleGraph& G) {
  auto B = std::make_shared<const BondLattice>(bond_lattice(G));
  return std::shared_ptr<const RankedPoset>(B, &B->poset());
}

template <class F>
OSComplex<F> diagonal_complex(const ManifoldData& M, const SimpleGraph& G) {
  auto D = diagonal_presheaf<F>(M, G);
  return OSComplex<F>(std::make_shared<const Presheaf<F>>(std::move(D.presheaf)), D.bond->atom_order);
}

template <class F>
void check_boundary_squared(const OSComplex<F>& K, Tally& t, const std::string& what) {
  for (const auto& [cell, gens] : K.cells()) {
    const Bidegree next{cell.first + 1, cell.second};
    t.expect((K.differential(next) * K.differential(cell)).is_zero(),
             [&] { return what + ": boundary squared nonzero at " + bidegree_string(cell); });
  }
}

inline SimpleGraph random_graph(int n, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 2) edges.push_back({i, j});
  return SimpleGraph(n, edges);
}

inline CentralArrangement random_arrangement(int dim, std::size_t count, std::mt19937_64& rng) {
  std::vector<Vector<Rational>> normals;
  std::uniform_int_distribution<int> coord(-2, 2);
  while (normals.size() < count) {
    Vector<Rational> v(dim);
    for (auto& x : v) x = coord(rng);
    std::vector<Vector<Rational>> trial = normals;
    trial.push_back(v);
    try {
      CentralArrangement(dim, trial);
      normals = std::move(trial);
    } catch (const ValidationError&) {
    }
  }
  return CentralArrangement(dim, std::move(normals));
}

inline LaurentPoly2 product_formula(int m, int n) {
  LaurentPoly2 p(1);
  for (int k = 1; k < n; ++k) p *= LaurentPoly2(1) + LaurentPoly2::monomial(0, m - 1, k);
  return p;
}

inline mpz_class chromatic_at(const SimpleGraph& G, long x) {
  return chromatic_poly_dc(G).evaluate(1, x).get_num();
}

inline std::vector<long> random_betti(std::mt19937_64& rng) {
  const int m = 1 + static_cast<int>(rng() % 4);
  std::vector<long> betti(m + 1);
  for (auto& b : betti) b = static_cast<long>(rng() % 3);
  betti[0] = 1;
  return betti;
}

}  // namespace detail

namespace suites {

inline void mobius(Tally& t, const CheckOptions&) {
  for (const auto& G : nonisomorphic_graphs(1, 5)) {
    const auto B = bond_lattice(G);
    const auto& P = B.poset();
    const auto A = OSAlgebra::of_lattice(B.lattice, B.atom_order);
    const auto& mu = P.mobius_row(B.lattice.bottom());
    for (std::size_t p = 0; p < P.size(); ++p) {
      const long long nbc = static_cast<long long>(A.dim(p));
      const long long signed_mu = (P.rank(p) % 2 ? -1 : 1) * mu[p];
      const auto over_q = static_cast<long long>(os_dim_oracle<Rational>(P, p, B.atom_order));
      const auto over_2 = static_cast<long long>(os_dim_oracle<Gf2>(P, p, B.atom_order));
      t.expect(nbc == signed_mu && nbc == over_q && nbc == over_2, [&] {
        return G.encoding() + " at " + P.label(p) + ": nbc " + std::to_string(nbc) + ", quotient Q " +
               std::to_string(over_q) + ", quotient GF2 " + std::to_string(over_2) + ", mobius " +
               std::to_string(signed_mu);
      });
    }
  }
}

inline void exactness(Tally& t, const CheckOptions&) {
  for (const auto& G : nonisomorphic_graphs(1, 5)) {
    const auto B = bond_lattice(G);
    const auto& P = B.poset();
    for (std::size_t p = 0; p < P.size(); ++p) {
      if (p == B.lattice.bottom()) continue;
      const OSAlgebra A(P, p, B.atom_order);
      t.expect(exactness_check<Rational>(A).exact && exactness_check<Gf2>(A).exact,
               [&] { return G.encoding() + " at " + P.label(p) + ": homology is nonzero"; });
    }
  }
}

inline void chromatic(Tally& t, const CheckOptions&) {
  for (const auto& G : nonisomorphic_graphs(1, 6)) {
    const auto dc = chromatic_poly_dc(G);
    const auto mob = chromatic_poly_mobius(G);
    t.expect(dc == mob, [&] { return G.encoding() + ": " + detail::poly(dc) + " vs " + detail::poly(mob); });
    if (G.vertices() > 5) continue;
    for (int k = 0; k <= 4; ++k) {
      const mpz_class value = dc.evaluate(1, k).get_num();
      const long long count = count_proper_colorings(G, k);
      t.expect(value == static_cast<long>(count), [&] {
        return G.encoding() + " with " + std::to_string(k) + " colors: " + value.get_str() + " vs " +
               std::to_string(count);
      });
    }
  }
}

/// Homology of the skyscraper at alpha restricted to every upper set containing it.
inline void skyscraper_on(const std::shared_ptr<const RankedPoset>& P, const std::string& name, Tally& t) {
  const auto stalk = GradedSpace::from_degrees({0, 2});
  for (std::size_t p = 0; p < P->size(); ++p) {
    const Subposet upper = upper_set(*P, p);
    auto U = std::make_shared<const RankedPoset>(upper.poset);
    const std::size_t base = *U->bottom();
    for (std::size_t alpha = 0; alpha < P->size(); ++alpha) {
      const auto local = upper.from_parent(alpha);
      if (!local) continue;
      const OSComplex<Rational> K(std::make_shared<const Presheaf<Rational>>(skyscraper<Rational>(U, *local, stalk)));
      const auto page = homology(K);
      const auto expected = *local == base ? std::map<Bidegree, std::size_t>{{{0, 0}, 1}, {{0, 2}, 1}}
                                           : std::map<Bidegree, std::size_t>{};
      t.expect(page.dims() == expected, [&] {
        return name + ": upper set of " + P->label(p) + " with support " + P->label(alpha) + " has " +
               std::to_string(page.total_dim()) + " classes";
      });
    }
  }
}

inline void skyscraper(Tally& t, const CheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < 4; ++k) {
    const auto G = detail::random_graph(3 + k % 2, rng);
    skyscraper_on(detail::bond_poset(G), "bond lattice " + G.encoding(), t);
  }
  skyscraper_on(detail::bond_poset(SimpleGraph::complete(4)), "bond lattice K4", t);
  for (int d : {3, 4}) {
    const auto A = detail::random_arrangement(d, 20, rng);
    const auto flats = intersection_poset(A, 2);
    skyscraper_on(detail::shared_poset(flats.poset),
                  "rank-2 truncation of 20 hyperplanes in dimension " + std::to_string(d), t);
  }
}

inline void leibniz(Tally& t, const CheckOptions&) {
  auto run = [&](const auto& K, const std::string& what) {
    t.expect(leibniz_check(K), [&] { return what; });
    detail::check_boundary_squared(K, t, what);
  };
  const auto cp1 = catalog::projective_line();
  const auto rq = catalog::euclidean(2, FieldTag::Q);
  const auto s1 = catalog::circle();
  const auto r2 = catalog::euclidean(2);
  bool nonzero_differential = false;
  for (const auto& G : nonisomorphic_graphs(1, 4)) {
    const auto K = detail::diagonal_complex<Rational>(cp1, G);
    for (const auto& [cell, gens] : K.cells()) nonzero_differential |= !K.differential(cell).is_zero();
    run(K, "CP1 over " + G.encoding());
    run(detail::diagonal_complex<Rational>(rq, G), "R2 over Q, " + G.encoding());
    run(detail::diagonal_complex<Gf2>(s1, G), "S1 over GF2, " + G.encoding());
    run(detail::diagonal_complex<Gf2>(r2, G), "R2 over GF2, " + G.encoding());
  }
  t.expect(nonzero_differential, [] { return "no CP1 complex had a nonzero differential"; });
}

inline void e1_poly(Tally& t, const CheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  const auto graphs = nonisomorphic_graphs(1, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto betti = detail::random_betti(rng);
    const int m = static_cast<int>(betti.size()) - 1;
    const auto M = ManifoldData::from_betti(m, betti, FieldTag::Q);
    const auto shift = LaurentPoly2::monomial(-1, m);
    for (const auto& G : graphs) {
      const auto closed = e1_poly_closed(M, G);
      const auto direct = e1_poly_direct(M, G);
      t.expect(closed == direct,
               [&] { return G.encoding() + ": closed " + detail::poly(closed) + " vs direct " + detail::poly(direct); });
      for (const auto& e : G.edges()) {
        const auto rhs = e1_poly_closed(M, delete_edge(G, e)) + shift * e1_poly_closed(M, contract_edge(G, e));
        t.expect(closed == rhs, [&] {
          return G.encoding() + ": deletion-contraction fails on edge " + std::to_string(e.first) + "-" +
                 std::to_string(e.second);
        });
      }
    }
  }
}

inline void classical(Tally& t, const CheckOptions&) {
  for (int m = 2; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n) {
      const auto got = poincare_z2(catalog::euclidean(m), SimpleGraph::complete(n));
      const auto expected = detail::product_formula(m, n);
      t.expect(got == expected, [&] {
        return "R^" + std::to_string(m) + ", K" + std::to_string(n) + ": " + detail::poly(got) + " vs " +
               detail::poly(expected);
      });
    }
}

inline void triple(Tally& t, const CheckOptions&) {
  for (const auto& [name, M] : {std::pair{"R2", catalog::euclidean(2)}, std::pair{"S1xR", catalog::cylinder()}})
    for (const auto& G : nonisomorphic_graphs(1, 4)) {
      const auto formula = poincare_z2(M, G);
      const auto pres = presentation(M, G);
      const auto page = chromatic_page<Gf2>(M, G);
      const std::string what = std::string(name) + " over " + G.encoding();
      t.expect(pres.poincare() == formula && page.poincare() == formula, [&] {
        return what + ": formula " + detail::poly(formula) + ", presentation " + detail::poly(pres.poincare()) +
               ", page " + detail::poly(page.poincare());
      });
      t.expect(pres.two_variable() == page.two_variable(), [&] { return what + ": bigraded dimensions differ"; });
    }
}

inline void projective(Tally& t, const CheckOptions&) {
  const auto cp1 = catalog::projective_line();
  struct Case {
    std::string name;
    ManifoldData manifold;
    SimpleGraph graph;
    std::vector<long> betti;
  };
  const std::vector<Case> cases{{"CP1, K2", cp1, SimpleGraph::complete(2), {1, 0, 1}},
                                {"CP1, K3", cp1, SimpleGraph::complete(3), {1, 0, 0, 1}},
                                {"elliptic curve, K2", catalog::elliptic_curve(), SimpleGraph::complete(2), {1, 4, 5, 2}}};
  for (const auto& c : cases) {
    const auto start = detail::Clock::now();
    const auto page = betti_projective(c.manifold, c.graph);
    const double seconds = detail::seconds_since(start);
    t.expect(page.betti() == c.betti, [&] { return c.name + ": Betti numbers differ"; });
    t.expect(page.collapse == "guaranteed", [&] { return c.name + ": collapse is " + page.collapse; });
    t.expect(seconds < 30, [&] { return c.name + ": " + detail::time_limit_failure(seconds, 30); });
    if (c.name == "CP1, K2") {
      t.expect(page.weights, [] { return "CP1, K2: page carries no weights"; });
      for (const auto& cls : page.classes)
        if (cls.cell.first + cls.cell.second == 2)
          t.expect(cls.cell.second == 2, [&] { return "CP1, K2: degree-2 class has weight " + std::to_string(cls.cell.second); });
    }
  }
}

inline void zaslavsky(Tally& t, const CheckOptions& opts) {
  auto lines = [](int n) {
    std::vector<Vector<Rational>> normals;
    for (int k = 0; k < n; ++k) normals.push_back({Rational(1), Rational(k)});
    return CentralArrangement(2, std::move(normals));
  };
  std::vector<std::tuple<std::string, CentralArrangement, std::vector<long long>>> cases{
      {"coordinate planes in R3", CentralArrangement::coordinate(3), {1, 6, 12, 8}}};
  for (int n = 2; n <= 4; ++n) cases.push_back({std::to_string(n) + " lines", lines(n), {1, 2LL * n, 2LL * n}});
  std::mt19937_64 rng(opts.seed);
  cases.push_back({"braid arrangement in R3", CentralArrangement::braid(3), {}});
  cases.push_back({"braid arrangement in R4", CentralArrangement::braid(4), {}});
  cases.push_back({"random arrangement in R3", detail::random_arrangement(3, 6, rng), {}});
  for (const auto& [name, A, expected] : cases) {
    const auto L = intersection_lattice(A);
    const auto f = zaslavsky_f(L);
    if (!expected.empty())
      t.expect(f == expected, [&] { return name + ": " + f_vector_string(f); });
    t.expect(f.back() == chamber_count(L),
             [&] { return name + ": " + std::to_string(f.back()) + " chambers vs " + std::to_string(chamber_count(L)); });
  }
}

inline void complex_poincare(Tally& t, const CheckOptions&) {
  const auto t1 = LaurentPoly2::t_pow(1);
  const auto braid = complex_poincare(CentralArrangement::braid(3));
  const auto expected = (1 + t1) * (1 + 2 * t1);
  t.expect(braid == expected, [&] { return "braid in C3: " + detail::poly(braid); });
  for (int m = 2; m <= 3; ++m) {
    const auto z2 = poincare_z2(catalog::euclidean(m), SimpleGraph::complete(3));
    const auto rescaled = braid.compose_t(t1.pow(m - 1));
    t.expect(z2 == rescaled, [&] {
      return "R^" + std::to_string(m) + ", K3: " + detail::poly(z2) + " vs rescaled " + detail::poly(rescaled);
    });
  }
}

inline void euler(Tally& t, const CheckOptions& opts) {
  auto expect_chi = [&](const mpq_class& value, const ManifoldData& M, const SimpleGraph& G, const std::string& what) {
    const long base = M.euler_characteristic();
    mpz_class chi = detail::chromatic_at(G, M.real_dim % 2 ? -base : base);
    if (M.real_dim % 2 && G.vertices() % 2) chi = -chi;
    t.expect(value == chi && euler_char(M, G) == chi, [&] {
      return what + " over " + G.encoding() + ": " + value.get_str() + " vs " + chi.get_str();
    });
  };
  for (int m = 2; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n)
      expect_chi(poincare_z2(catalog::euclidean(m), SimpleGraph::complete(n)).evaluate(1, -1), catalog::euclidean(m),
                 SimpleGraph::complete(n), "R^" + std::to_string(m) + " formula");
  const auto graphs = nonisomorphic_graphs(1, 4);
  for (const auto& [name, M] : {std::pair{"R2", catalog::euclidean(2)}, std::pair{"S1xR", catalog::cylinder()}})
    for (const auto& G : graphs) {
      expect_chi(poincare_z2(M, G).evaluate(1, -1), M, G, std::string(name) + " formula");
      expect_chi(presentation(M, G).poincare().evaluate(1, -1), M, G, std::string(name) + " presentation");
      expect_chi(chromatic_page<Gf2>(M, G).euler_characteristic(), M, G, std::string(name) + " page");
    }
  for (const auto& G : graphs)
    expect_chi(chromatic_page<Gf2>(catalog::circle(), G).euler_characteristic(), catalog::circle(), G, "S1 page");
  const auto cp1 = catalog::projective_line();
  for (const auto& G : graphs) {
    const auto page = betti_projective(cp1, G);
    expect_chi(page.euler_characteristic(), cp1, G, "CP1 page");
    expect_chi(page.poincare().evaluate(1, -1), cp1, G, "CP1 Betti");
  }
  const auto elliptic = catalog::elliptic_curve();
  expect_chi(betti_projective(elliptic, SimpleGraph::complete(2)).euler_characteristic(), elliptic,
             SimpleGraph::complete(2), "elliptic page");
  std::mt19937_64 rng(opts.seed);
  for (int trial = 0; trial < 20; ++trial) {
    const auto betti = detail::random_betti(rng);
    const auto M = ManifoldData::from_betti(static_cast<int>(betti.size()) - 1, betti, FieldTag::Q);
    for (const auto& G : nonisomorphic_graphs(1, 5)) expect_chi(e1_poly_closed(M, G).evaluate(-1, -1), M, G, "E1 polynomial");
  }
  const auto plane = catalog::euclidean(2, FieldTag::Q);
  for (int n = 2; n <= 4; ++n)
    expect_chi(complex_poincare(CentralArrangement::braid(n)).evaluate(1, -1), plane, SimpleGraph::complete(n),
               "braid arrangement");
}

inline E2Page<Gf2> dg1_negative_control() {
  // a class in column -2 that no product of columns 0 and -1 reaches
  E2Page<Gf2> page;
  page.classes = {{{0, 0}, {}}, {{-2, 4}, {}}};
  using Combination = E2Page<Gf2>::Combination;
  page.products = std::vector<std::vector<Combination>>(2, std::vector<Combination>(2));
  (*page.products)[0][0] = {{0, Gf2(1)}};
  (*page.products)[0][1] = {{1, Gf2(1)}};
  (*page.products)[1][0] = {{1, Gf2(1)}};
  return page;
}

inline void dg1(Tally& t, const CheckOptions&) {
  for (const auto& [name, M] : {std::pair{"R2", catalog::euclidean(2)}, std::pair{"R3", catalog::euclidean(3)},
                                std::pair{"S1xR", catalog::cylinder()}})
    for (const auto& G : nonisomorphic_graphs(1, 4)) {
      const auto page = chromatic_page<Gf2>(M, G);
      t.expect(dg1_generation_check(page), [&] { return std::string(name) + " over " + G.encoding() + ": not generated"; });
    }
  t.expect(!dg1_generation_check(dg1_negative_control()), [] { return "negative control passed the check"; });
}

}  // namespace suites

struct Criterion {
  int id;
  std::string name;
  std::string title;
  std::optional<double> time_limit;
  void (*run)(Tally&, const CheckOptions&);
};

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "mobius", "NBC count, quotient dimension and Mobius value agree", 60, suites::mobius},
      {2, "exactness", "local OS complexes above the bottom are exact", 60, suites::exactness},
      {3, "chromatic", "deletion-contraction, Mobius sum and colorings agree", std::nullopt, suites::chromatic},
      {4, "skyscraper", "skyscraper homology vanishes off the support base", std::nullopt, suites::skyscraper},
      {5, "leibniz", "Leibniz rule and boundary squared on diagonal complexes", 120, suites::leibniz},
      {6, "e1-poly", "closed and direct E1 polynomials with deletion-contraction", std::nullopt, suites::e1_poly},
      {7, "classical", "Euclidean configuration spaces over GF2", 10, suites::classical},
      {8, "triple", "formula, presentation and E2 page agree over GF2", std::nullopt, suites::triple},
      {9, "projective", "Betti numbers of projective pipelines", std::nullopt, suites::projective},
      {10, "zaslavsky", "face counts of real arrangements", std::nullopt, suites::zaslavsky},
      {11, "complex-poincare", "Poincare polynomial of the braid complement", std::nullopt, suites::complex_poincare},
      {12, "euler", "Euler characteristics match the chromatic polynomial", std::nullopt, suites::euler},
      {13, "dg1", "degeneration detection on GF2 pages and a negative control", std::nullopt, suites::dg1},
  };
  return all;
}

inline const Criterion* find_criterion(const std::string& name) {
  for (const auto& c : criteria())
    if (c.name == name || std::to_string(c.id) == name) return &c;
  return nullptr;
}

inline CriterionResult run_criterion(const Criterion& c, const CheckOptions& opts = {}) {
  Tally tally;
  const auto start = detail::Clock::now();
  try {
    c.run(tally, opts);
  } catch (const std::exception& e) {
    tally.fail(std::string("exception: ") + e.what());
  }
  CriterionResult r{c.id, c.name, false, {}, detail::seconds_since(start)};
  if (!tally.passed()) {
    r.detail = tally.failure();
  } else if (c.time_limit && r.seconds >= *c.time_limit) {
    r.detail = detail::time_limit_failure(r.seconds, *c.time_limit);
  } else {
    r.passed = true;
    r.detail = std::to_string(tally.cases()) + " cases";
  }
  return r;
}

}  // namespace osa
