#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "osa/graph.hpp"
#include "osa/hyperplane.hpp"

using namespace osa;

namespace {

CentralArrangement load(const std::string& name) {
  std::ifstream in(std::string(OSA_DATA_DIR) + "/arrangements/" + name + ".json");
  return arrangement_from_json(nlohmann::json::parse(in));
}

CentralArrangement random_arrangement(std::mt19937_64& rng, int d, std::size_t n) {
  std::vector<Vector<Rational>> normals;
  while (normals.size() < n) {
    Vector<Rational> v(d);
    for (auto& x : v) x = static_cast<long>(rng() % 7) - 3;
    normals.push_back(v);
    try {
      CentralArrangement(d, normals);
    } catch (const ValidationError&) {
      normals.pop_back();
    }
  }
  return CentralArrangement(d, normals);
}

}  // namespace

TEST(Arrangement, Validation) {
  EXPECT_THROW(CentralArrangement(2, {{Rational(0), Rational(0)}}), ValidationError);
  EXPECT_THROW(CentralArrangement(2, {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}), ValidationError);
  EXPECT_THROW(CentralArrangement(2, {{Rational(1)}}), ValidationError);
  EXPECT_THROW(CentralArrangement::braid(8), SizeGuardError);
  EXPECT_THROW(arrangement_from_json(nlohmann::json::parse(R"({"dim":2,"normals":[["1/0","1"]]})")), Error);
}

TEST(IntersectionLattice, SingleHyperplaneIsChain) {
  auto L = intersection_lattice(CentralArrangement(3, {{Rational(1), Rational(1), Rational(0)}}));
  EXPECT_EQ(L.poset().ranks(), (std::vector<int>{0, 1}));
}

TEST(IntersectionLattice, CoordinatePlanesGiveBooleanLattice) {
  auto L = intersection_lattice(load("coords3"));
  EXPECT_EQ(L.poset().ranks(), (std::vector<int>{0, 1, 1, 1, 2, 2, 2, 3}));
  for (std::size_t p = 0; p < L.poset().size(); ++p)
    EXPECT_EQ(std::abs(L.poset().mobius(L.lattice.bottom(), p)), 1);
}

TEST(IntersectionLattice, BraidMatchesBondLatticeOfComplete) {
  for (int n = 2; n <= 5; ++n) {
    auto L = intersection_lattice(CentralArrangement::braid(n));
    auto B = bond_lattice(SimpleGraph::complete(n));
    ASSERT_EQ(L.poset().size(), B.poset().size()) << n;
    EXPECT_EQ(L.poset().ranks(), B.poset().ranks());
    auto sorted_mobius = [](const RankedPoset& P, std::size_t bottom) {
      std::vector<std::pair<int, long long>> v;
      for (std::size_t p = 0; p < P.size(); ++p) v.push_back({P.rank(p), P.mobius(bottom, p)});
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(sorted_mobius(L.poset(), L.lattice.bottom()), sorted_mobius(B.poset(), B.lattice.bottom()));
  }
}

TEST(IntersectionPoset, TruncationIsLocallyGeometric) {
  std::mt19937_64 rng(5);
  const auto A = random_arrangement(rng, 4, 20);
  const auto T = intersection_poset(A, 2);
  EXPECT_FALSE(T.poset.top().has_value());
  EXPECT_TRUE(check_locally_geometric(T.poset).ok);
  EXPECT_EQ(T.poset.atoms().size(), 20u);
}

TEST(Zaslavsky, Examples) {
  EXPECT_EQ(zaslavsky_f(load("coords3")), (std::vector<long long>{1, 6, 12, 8}));
  for (const char* name : {"lines2", "lines3", "lines4"}) {
    const auto A = load(name);
    const long long n = static_cast<long long>(A.size());
    EXPECT_EQ(zaslavsky_f(A), (std::vector<long long>{1, 2 * n, 2 * n})) << name;
  }
  EXPECT_EQ(zaslavsky_f(CentralArrangement(3, {{Rational(0), Rational(0), Rational(5)}})),
            (std::vector<long long>{0, 0, 1, 2}));
}

TEST(Zaslavsky, ChambersAreMobiusSum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto A = random_arrangement(rng, 2 + trial % 3, 3 + trial % 5);
    const auto L = intersection_lattice(A);
    const auto f = zaslavsky_f(L);
    EXPECT_EQ(f.back(), chamber_count(L));
    long long euler = 0;
    for (std::size_t k = 0; k < f.size(); ++k) euler += (k % 2 ? -1 : 1) * f[k];
    // faces of a complete fan in R^d
    EXPECT_EQ(euler, (f.size() - 1) % 2 ? -1 : 1) << trial;
  }
}

TEST(ComplexPoincare, Examples) {
  const auto t = LaurentPoly2::t_pow(1);
  EXPECT_EQ(complex_poincare(CentralArrangement(2, {{Rational(1), Rational(0)}})), 1 + t);
  EXPECT_EQ(complex_poincare(load("braid3")), (1 + t) * (1 + 2 * t));
  EXPECT_EQ(complex_poincare(load("coords3")), (1 + t).pow(3));
}

TEST(ComplexPoincare, VanishesAtMinusOne) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = complex_poincare(random_arrangement(rng, 3, 2 + trial % 6));
    EXPECT_EQ(P.evaluate(1, -1), 0);
  }
}

TEST(ArrangementJson, RoundTrip) {
  const auto A = load("lines4");
  const auto B = arrangement_from_json(arrangement_to_json(A));
  EXPECT_EQ(B.normals, A.normals);
  EXPECT_EQ(f_vector_string(zaslavsky_f(B)), "f = (1, 8, 8)");
}
