#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "osa/catalog.hpp"
#include "osa/chromatic.hpp"
#include "osa/hyperplane.hpp"
#include "test_util.hpp"

using namespace osa;

namespace {

ManifoldData load_manifold(const std::string& name) {
  std::ifstream in(std::string(OSA_DATA_DIR) + "/manifolds/" + name + ".json");
  return manifold_from_json(nlohmann::json::parse(in));
}

ManifoldData euclidean(int m) {
  auto M = ManifoldData::from_betti(m, {1}, FieldTag::GF2);
  M.zero_diagonal = true;
  return M;
}

const LaurentPoly2 t = LaurentPoly2::t_pow(1);
const LaurentPoly2 s_inv = LaurentPoly2::s_pow(-1);

}  // namespace

TEST(E1Poly, Examples) {
  const auto S1 = ManifoldData::from_betti(1, {1, 1}, FieldTag::GF2);
  const auto K2 = SimpleGraph::complete(2);
  EXPECT_EQ(e1_poly_closed(S1, K2), (1 + t).pow(2) + s_inv * t * (1 + t));
  EXPECT_EQ(e1_poly_closed(euclidean(3), K2), 1 + s_inv * t.pow(3));
  EXPECT_EQ(e1_poly_closed(S1, SimpleGraph(3, {})), (1 + t).pow(3));
  EXPECT_EQ(e1_poly_direct(euclidean(2), SimpleGraph::complete(3)),
            1 + 3 * s_inv * t.pow(2) + 2 * s_inv.pow(2) * t.pow(4));
  for (const auto& G : {K2, SimpleGraph(3, {})}) EXPECT_EQ(e1_poly_direct(S1, G), e1_poly_closed(S1, G));
}

TEST(E1Poly, ClosedEqualsDirectAndDeletionContraction) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    std::vector<long> betti(m + 1);
    for (auto& b : betti) b = static_cast<long>(rng() % 3);
    betti[0] = 1;
    const auto M = ManifoldData::from_betti(m, betti, FieldTag::Q);
    for (const auto& G : fixtures::graphs_up_to(4)) {
      const auto closed = e1_poly_closed(M, G);
      EXPECT_EQ(closed, e1_poly_direct(M, G)) << G.encoding();
      for (const auto& e : G.edges())
        EXPECT_EQ(closed, e1_poly_closed(M, delete_edge(G, e)) + s_inv * t.pow(m) * e1_poly_closed(M, contract_edge(G, e)));
    }
  }
}

TEST(PoincareZ2, ClassicalConfigurationSpaces) {
  for (int m = 2; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n) {
      LaurentPoly2 expected(1);
      for (int k = 1; k < n; ++k) expected *= 1 + k * t.pow(m - 1);
      EXPECT_EQ(poincare_z2(euclidean(m), SimpleGraph::complete(n)), expected) << m << " " << n;
    }
  EXPECT_EQ(poincare_z2(euclidean(2), SimpleGraph::complete(3)), 1 + 3 * t + 2 * t.pow(2));
  const auto SR = load_manifold("s1xr");
  EXPECT_EQ(poincare_z2(SR, SimpleGraph(3, {})), (1 + t).pow(3));
  EXPECT_THROW(poincare_z2(load_manifold("s1"), SimpleGraph::complete(2)), ValidationError);
}

TEST(PoincareZ2, DeletionContraction) {
  const auto SR = load_manifold("s1xr");
  for (const auto& G : fixtures::graphs_up_to(4))
    for (const auto& e : G.edges())
      EXPECT_EQ(poincare_z2(SR, G), poincare_z2(SR, delete_edge(G, e)) + t * poincare_z2(SR, contract_edge(G, e)));
}

TEST(Cycles, SmallGraphs) {
  EXPECT_TRUE(simple_cycles(SimpleGraph::path(4)).empty());
  EXPECT_EQ(simple_cycles(SimpleGraph::complete(3)).size(), 1u);
  EXPECT_EQ(simple_cycles(SimpleGraph::complete(4)).size(), 7u);
  EXPECT_EQ(simple_cycles(SimpleGraph::complete(5)).size(), 37u);
}

TEST(Presentation, Examples) {
  const auto K3 = presentation(euclidean(2), SimpleGraph::complete(3));
  EXPECT_EQ(K3.edge_degree_dims(), (std::vector<std::size_t>{1, 3, 2}));
  EXPECT_EQ(K3.cycles.size(), 1u);
  EXPECT_TRUE(presentation(euclidean(2), SimpleGraph::path(4)).cycles.empty());

  auto S1 = load_manifold("s1");
  S1.diagonal_class.reset();
  S1.zero_diagonal = true;
  const auto K2 = presentation(S1, SimpleGraph::complete(2));
  EXPECT_EQ(K2.two_variable(), e1_poly_direct(S1, SimpleGraph::complete(2)));
  EXPECT_THROW(presentation(load_manifold("cp1"), SimpleGraph::complete(2)), ValidationError);
}

TEST(Presentation, TripleAgreement) {
  for (const char* name : {"r2", "s1xr"}) {
    const auto M = load_manifold(name);
    for (const auto& G : fixtures::graphs_up_to(4)) {
      const auto formula = poincare_z2(M, G);
      const auto pres = presentation(M, G);
      const auto page = chromatic_page<Gf2>(M, G);
      EXPECT_EQ(pres.poincare(), formula) << name << " " << G.encoding();
      EXPECT_EQ(page.poincare(), formula) << name << " " << G.encoding();
      EXPECT_EQ(pres.two_variable(), page.two_variable()) << name << " " << G.encoding();
      EXPECT_EQ(page.collapse, "guaranteed");
      EXPECT_TRUE(dg1_generation_check(page)) << name << " " << G.encoding();
    }
  }
}

TEST(BettiProjective, PaperCases) {
  const auto cp1 = load_manifold("cp1");
  const auto k2 = betti_projective(cp1, SimpleGraph::complete(2));
  EXPECT_EQ(k2.betti(), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(k2.collapse, "guaranteed");
  for (const auto& c : k2.classes)
    if (c.cell.first + c.cell.second == 2) {
      EXPECT_EQ(c.cell.second, 2);
    }
  EXPECT_EQ(betti_projective(cp1, SimpleGraph::complete(3)).betti(), (std::vector<long>{1, 0, 0, 1}));
  EXPECT_EQ(betti_projective(load_manifold("elliptic"), SimpleGraph::complete(2)).betti(), (std::vector<long>{1, 4, 5, 2}));
  EXPECT_THROW(betti_projective(load_manifold("r2"), SimpleGraph::complete(2)), ValidationError);
}

TEST(BettiProjective, EulerAndPositivity) {
  const auto cp1 = load_manifold("cp1");
  for (const auto& G : fixtures::graphs_up_to(4)) {
    const auto page = betti_projective(cp1, G);
    EXPECT_EQ(mpz_class(page.euler_characteristic()), euler_char(cp1, G)) << G.encoding();
    EXPECT_EQ(page.poincare().evaluate(1, -1), mpq_class(euler_char(cp1, G)));
  }
}

TEST(EulerChar, Examples) {
  const auto S2 = ManifoldData::from_betti(2, {1, 0, 1}, FieldTag::Q);
  EXPECT_EQ(euler_char(S2, SimpleGraph::complete(3)), 0);
  EXPECT_EQ(euler_char(S2, SimpleGraph(3, {})), 8);
  EXPECT_EQ(euler_char(ManifoldData::from_betti(1, {1, 1}, FieldTag::Q), SimpleGraph::cycle(4)), 0);
  // F(R^3, 2) is homotopic to S^2
  EXPECT_EQ(euler_char(euclidean(3), SimpleGraph::complete(2)), 2);
  EXPECT_EQ(poincare_z2(euclidean(3), SimpleGraph::complete(2)).evaluate(1, -1), 2);
}

TEST(RingHypotheses, SmallManifolds) {
  EXPECT_TRUE(check_thm_alg(euclidean(2)));
  EXPECT_TRUE(check_thm_alg(euclidean(3)));
  EXPECT_FALSE(check_thm_alg(load_manifold("s1xr")));
  EXPECT_FALSE(check_thm_alg(load_manifold("s1")));
  EXPECT_FALSE(check_thm_alg(load_manifold("cp1")));
}

TEST(CrossModule, EuclideanPlaneMatchesBraidArrangement) {
  const auto R2 = load_manifold("r2_q");
  for (int n = 2; n <= 4; ++n) {
    const auto page = chromatic_page<Rational>(R2, SimpleGraph::complete(n));
    const auto P = complex_poincare(CentralArrangement::braid(n));
    EXPECT_EQ(page.poincare(), P) << n;
  }
}

TEST(Catalog, MatchesDataFiles) {
  const std::vector<std::pair<std::string, ManifoldData>> cases{{"r2", catalog::euclidean(2)},
                                                                {"r3", catalog::euclidean(3)},
                                                                {"r2_q", catalog::euclidean(2, FieldTag::Q)},
                                                                {"s1", catalog::circle()},
                                                                {"s1xr", catalog::cylinder()},
                                                                {"cp1", catalog::projective_line()},
                                                                {"elliptic", catalog::elliptic_curve()}};
  for (const auto& [name, M] : cases) EXPECT_EQ(manifold_to_json(M), manifold_to_json(load_manifold(name))) << name;
}
