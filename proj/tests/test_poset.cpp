#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "osa/graph.hpp"
#include "osa/poset.hpp"

using namespace osa;

namespace {

RankedPoset boolean_lattice(int n) {
  std::vector<std::string> labels;
  std::vector<int> ranks;
  std::vector<Cover> covers;
  for (unsigned s = 0; s < (1u << n); ++s) {
    std::string l = "{";
    for (int i = 0; i < n; ++i)
      if (s >> i & 1) l += std::to_string(i);
    labels.push_back(l + "}");
    ranks.push_back(__builtin_popcount(s));
    for (int i = 0; i < n; ++i)
      if (!(s >> i & 1)) covers.push_back({s, s | (1u << i)});
  }
  return RankedPoset(labels, ranks, covers);
}

RankedPoset chain(int length) {
  std::vector<std::string> labels;
  std::vector<int> ranks;
  std::vector<Cover> covers;
  for (int i = 0; i <= length; ++i) {
    labels.push_back("c" + std::to_string(i));
    ranks.push_back(i);
    if (i) covers.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i)});
  }
  return RankedPoset(labels, ranks, covers);
}

// 0 < p, q < s1, s2: p and q have two incomparable minimal upper bounds.
RankedPoset bowtie() {
  return RankedPoset({"0", "p", "q", "s1", "s2"}, {0, 1, 1, 2, 2}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}});
}

// mu by the defining recursion over an explicit list of pairs, as an oracle
long long mobius_oracle(const RankedPoset& P, std::size_t p, std::size_t q) {
  if (p == q) return 1;
  long long s = 0;
  for (std::size_t l = 0; l < P.size(); ++l)
    if (P.leq(p, l) && P.leq(l, q) && l != q) s += mobius_oracle(P, p, l);
  return -s;
}

}  // namespace

TEST(Mobius, DiagonalIsOne) {
  auto B = boolean_lattice(3);
  for (std::size_t p = 0; p < B.size(); ++p) EXPECT_EQ(B.mobius(p, p), 1);
}

TEST(Mobius, BooleanLattice) {
  auto B = boolean_lattice(3);
  EXPECT_EQ(B.mobius(B.index_of("{}"), B.index_of("{012}")), -1);
}

TEST(Mobius, PartitionLatticeOfThree) {
  auto L = bond_lattice(SimpleGraph::complete(3));
  EXPECT_EQ(L.poset().mobius(L.lattice.bottom(), L.lattice.top()), 2);
}

TEST(Mobius, RejectsIncomparable) {
  auto B = boolean_lattice(2);
  EXPECT_THROW(B.mobius(B.index_of("{0}"), B.index_of("{1}")), Error);
}

TEST(Mobius, MatchesRecursionAndSumsToZero) {
  for (const auto& P : {boolean_lattice(4), bond_lattice(SimpleGraph::complete(4)).poset(), bowtie(), chain(3)})
    for (std::size_t p = 0; p < P.size(); ++p)
      for (std::size_t q = 0; q < P.size(); ++q) {
        if (!P.leq(p, q)) continue;
        EXPECT_EQ(P.mobius(p, q), mobius_oracle(P, p, q));
        if (p == q) continue;
        long long sum = 0;
        for (std::size_t l = 0; l < P.size(); ++l)
          if (P.leq(p, l) && P.leq(l, q)) sum += P.mobius(p, l);
        EXPECT_EQ(sum, 0);
      }
}

TEST(CheckGeometric, BooleanLattice) { EXPECT_TRUE(check_geometric(boolean_lattice(3))); }

TEST(CheckGeometric, ChainFailsAtom) {
  auto v = check_geometric(chain(2));
  EXPECT_FALSE(v);
  ASSERT_EQ(v.witness.size(), 1u);
  EXPECT_EQ(chain(2).label(v.witness[0]), "c2");
}

TEST(CheckGeometric, BowtieIsNotALattice) {
  auto v = check_geometric(bowtie());
  EXPECT_FALSE(v);
}

TEST(CheckGeometric, BondLatticesAreGeometric) {
  for (auto G : {SimpleGraph::complete(4), SimpleGraph::cycle(5), SimpleGraph::path(4)})
    EXPECT_TRUE(check_geometric(bond_lattice(G).poset()));
}

TEST(CheckGeometric, NonSemimodular) {
  // hexagon: the join of the atoms a, b has rank 3
  RankedPoset P({"0", "a", "b", "x", "y", "1"}, {0, 1, 1, 2, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}});
  auto v = check_geometric(P);
  EXPECT_FALSE(v);
}

TEST(Interval, Singleton) {
  auto B = boolean_lattice(3);
  auto I = interval(B, 2, 2);
  EXPECT_EQ(I.poset.size(), 1u);
  EXPECT_EQ(I.poset.rank(0), 0);
}

TEST(Interval, BooleanCoatom) {
  auto B = boolean_lattice(3);
  auto I = interval(B, B.index_of("{}"), B.index_of("{01}"));
  EXPECT_EQ(I.poset.size(), 4u);
  EXPECT_EQ(I.poset.max_rank(), 2);
  EXPECT_TRUE(check_geometric(I.poset));
}

TEST(Interval, FullInterval) {
  auto L = bond_lattice(SimpleGraph::complete(3));
  auto I = interval(L.poset(), L.lattice.bottom(), L.lattice.top());
  EXPECT_EQ(I.poset.size(), 5u);
  EXPECT_EQ(I.poset.labels(), L.poset().labels());
}

TEST(Interval, RejectsNonComparable) {
  auto B = boolean_lattice(2);
  EXPECT_THROW(interval(B, B.index_of("{0}"), B.index_of("{1}")), Error);
}

TEST(Interval, EveryIntervalOfGeometricIsGeometric) {
  auto L = bond_lattice(SimpleGraph::complete(4));
  const auto& P = L.poset();
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = 0; b < P.size(); ++b)
      if (P.leq(a, b)) {
        EXPECT_TRUE(check_geometric(interval(P, a, b).poset)) << P.label(a) << " " << P.label(b);
      }
}

TEST(MinUpperBounds, BottomIsNeutral) {
  auto P = bowtie();
  for (std::size_t p = 0; p < P.size(); ++p) EXPECT_EQ(min_upper_bounds(P, p, 0), std::vector<std::size_t>{p});
}

TEST(MinUpperBounds, LatticeGivesJoin) {
  auto L = bond_lattice(SimpleGraph::complete(4));
  for (std::size_t p = 0; p < L.lattice.size(); ++p)
    for (std::size_t q = 0; q < L.lattice.size(); ++q)
      EXPECT_EQ(min_upper_bounds(L.poset(), p, q), std::vector<std::size_t>{L.lattice.join(p, q)});
}

TEST(MinUpperBounds, BowtieHasTwo) {
  auto P = bowtie();
  auto m = min_upper_bounds(P, P.index_of("p"), P.index_of("q"));
  // exhaustive oracle over all elements
  std::vector<std::size_t> expected;
  for (std::size_t s = 0; s < P.size(); ++s) {
    if (!P.leq(P.index_of("p"), s) || !P.leq(P.index_of("q"), s)) continue;
    bool minimal = true;
    for (std::size_t t = 0; t < P.size(); ++t)
      if (t != s && P.leq(t, s) && P.leq(P.index_of("p"), t) && P.leq(P.index_of("q"), t)) minimal = false;
    if (minimal) expected.push_back(s);
  }
  EXPECT_EQ(m, expected);
  EXPECT_EQ(m, (std::vector<std::size_t>{P.index_of("s1"), P.index_of("s2")}));
}

TEST(CanonicalLambda, IdentityAndLatticeCases) {
  auto P = bowtie();
  const auto p = P.index_of("p"), q = P.index_of("q");
  auto id = canonical_lambda(P, p, q, p, q);
  for (auto [s, t] : id) EXPECT_EQ(s, t);
  auto forced = canonical_lambda(P, p, q, p, 0);
  for (auto [s, t] : forced) EXPECT_EQ(t, p);
  auto L = bond_lattice(SimpleGraph::complete(3));
  const auto& LP = L.poset();
  const auto a = L.atom_order[0], b = L.atom_order[1];
  auto m = canonical_lambda(LP, a, b, a, L.lattice.bottom());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->second, a);
  EXPECT_THROW(canonical_lambda(LP, L.lattice.bottom(), b, a, b), Error);
}

TEST(CanonicalLambda, Composes) {
  auto L = bond_lattice(SimpleGraph::complete(4));
  const auto& P = L.poset();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t p1 = rng() % P.size(), q1 = rng() % P.size();
    auto below = [&](std::size_t x) {
      std::vector<std::size_t> d;
      for (std::size_t y = 0; y < P.size(); ++y)
        if (P.leq(y, x)) d.push_back(y);
      return d[rng() % d.size()];
    };
    std::size_t p2 = below(p1), q2 = below(q1), p3 = below(p2), q3 = below(q2);
    auto l12 = canonical_lambda(P, p1, q1, p2, q2);
    auto l23 = canonical_lambda(P, p2, q2, p3, q3);
    auto l13 = canonical_lambda(P, p1, q1, p3, q3);
    for (auto [s, t] : l12) EXPECT_EQ(l13.at(s), l23.at(t));
  }
}

TEST(Independent, Cases) {
  auto L = bond_lattice(SimpleGraph::complete(3));
  const auto& a = L.atom_order;
  EXPECT_TRUE(independent(L.lattice, {a[0]}));
  EXPECT_TRUE(independent(L.lattice, {a[0], a[1]}));
  EXPECT_FALSE(independent(L.lattice, {a[0], a[1], a[2]}));
  EXPECT_THROW(independent(L.lattice, {}), Error);
}

TEST(Independent, SubsetsOfIndependentSetsAreIndependent) {
  auto L = bond_lattice(SimpleGraph::complete(4));
  const auto& atoms = L.lattice.atoms();
  for (unsigned s = 1; s < (1u << atoms.size()); ++s) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (s >> i & 1) set.push_back(atoms[i]);
    if (!independent(L.lattice, set)) continue;
    for (unsigned t = s; t; t = (t - 1) & s) {
      std::vector<std::size_t> sub;
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (t >> i & 1) sub.push_back(atoms[i]);
      EXPECT_TRUE(independent(L.lattice, sub));
    }
  }
}

TEST(UpperSet, Cases) {
  auto L = bond_lattice(SimpleGraph::complete(3));
  const auto& P = L.poset();
  EXPECT_EQ(upper_set(P, L.lattice.bottom()).poset.labels(), P.labels());
  EXPECT_EQ(upper_set(P, L.lattice.top()).poset.size(), 1u);
  auto U = upper_set(P, L.atom_order[0]);
  EXPECT_EQ(U.poset.size(), 2u);
  EXPECT_EQ(U.poset.ranks(), (std::vector<int>{0, 1}));
  EXPECT_TRUE(check_locally_geometric(U.poset));
}

TEST(LocallyGeometric, BowtieAndTruncation) {
  EXPECT_TRUE(check_locally_geometric(bowtie()));
  EXPECT_FALSE(check_locally_geometric(chain(2)));
}

TEST(PosetJson, RoundTrip) {
  auto L = bond_lattice(SimpleGraph::cycle(4));
  auto j = poset_to_json(L.poset());
  auto back = poset_from_json(j);
  EXPECT_EQ(back.labels(), L.poset().labels());
  EXPECT_EQ(back.ranks(), L.poset().ranks());
  EXPECT_EQ(poset_to_json(back), j);
}

TEST(PosetValidation, RejectsBadCover) {
  EXPECT_THROW(RankedPoset({"a", "b"}, {0, 2}, {{0, 1}}), ValidationError);
  EXPECT_THROW(RankedPoset({"a", "a"}, {0, 1}, {{0, 1}}), ValidationError);
  EXPECT_THROW(RankedPoset({"a", "b", "c"}, {0, 1, 2}, {{0, 1}}, 2), SizeGuardError);
}
