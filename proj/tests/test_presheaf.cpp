#include <chrono>
#include <fstream>

#include <gtest/gtest.h>

#include "osa/presheaf.hpp"
#include "test_util.hpp"

using namespace osa;

namespace {

ManifoldData load_manifold(const std::string& name) {
  std::ifstream in(std::string(OSA_DATA_DIR) + "/manifolds/" + name + ".json");
  return manifold_from_json(nlohmann::json::parse(in));
}

std::shared_ptr<const RankedPoset> bond_poset(const SimpleGraph& G) {
  auto B = std::make_shared<const BondLattice>(bond_lattice(G));
  return std::shared_ptr<const RankedPoset>(B, &B->poset());
}

GradedSpace line(int degree = 0) { return GradedSpace::from_degrees({degree}); }

template <class F>
Chain<F> unit_at(std::size_t p, std::size_t i = 0) {
  return {{{p, i}, F(1)}};
}

}  // namespace

TEST(Skyscraper, SupportAndMaps) {
  auto P = bond_poset(SimpleGraph::complete(3));
  const std::size_t atom = P->atoms()[0];
  auto C = skyscraper<Rational>(P, atom, line());
  for (std::size_t p = 0; p < P->size(); ++p) EXPECT_EQ(C.space(p).dim(), P->leq(p, atom) ? 1u : 0u);
  EXPECT_EQ(C.map(atom, (*P->bottom())), Matrix<Rational>::identity(1));
  EXPECT_TRUE(validate(C));

  auto at_bottom = skyscraper<Gf2>(P, (*P->bottom()), line());
  EXPECT_EQ(at_bottom.space((*P->top())).dim(), 0u);
  auto constant = skyscraper<Gf2>(P, (*P->top()), line(3));
  for (std::size_t p = 0; p < P->size(); ++p) EXPECT_EQ(constant.space(p).degrees, std::vector<int>{3});
  EXPECT_TRUE(validate(constant));
}

TEST(Validate, CorruptedMapIsNamed) {
  auto P = bond_poset(SimpleGraph::complete(3));
  auto C = skyscraper<Rational>(P, (*P->top()), line());
  const std::size_t atom = P->atoms()[1];
  C.set_cover_map((*P->top()), atom, Matrix<Rational>::from_rows({{Rational(2)}}, 1));
  const auto v = validate(C);
  EXPECT_FALSE(v);
  EXPECT_NE(v.certificate.find(P->label((*P->top()))), std::string::npos);
  EXPECT_NE(v.certificate.find("path dependent"), std::string::npos);
}

TEST(Validate, DegreeMismatchAndBadShape) {
  auto P = bond_poset(SimpleGraph::complete(2));
  Presheaf<Gf2> C(P, {line(0), line(1)});
  C.set_cover_map((*P->top()), (*P->bottom()), Matrix<Gf2>::from_rows({{Gf2(1)}}, 1));
  EXPECT_FALSE(validate(C));
  EXPECT_THROW(C.set_cover_map((*P->top()), (*P->bottom()), Matrix<Gf2>(2, 1)), ValidationError);
  EXPECT_THROW(C.set_cover_map((*P->bottom()), (*P->top()), Matrix<Gf2>(1, 1)), Error);
}

TEST(Validate, ProductLeavingJoinsIsRejected) {
  auto P = bond_poset(SimpleGraph::complete(2));
  Presheaf<Rational> C(P, {line(), line()});
  C.set_product([&](std::size_t, std::size_t, std::size_t, std::size_t) {
    return std::vector<ProductTerm<Rational>>{{(*P->bottom()), 0, Rational(1)}};
  });
  const auto v = validate(C);
  EXPECT_FALSE(v);
  EXPECT_NE(v.certificate.find("minimal upper bounds"), std::string::npos);
}

TEST(PresheafJson, ReadsSpacesMapsAndProduct) {
  auto P = bond_poset(SimpleGraph::complete(2));
  const auto j = nlohmann::json::parse(R"({
    "spaces": [{"element": "{0},{1}", "degrees": [0]}, {"element": "{0,1}", "degrees": [0]}],
    "maps": [{"upper": "{0,1}", "lower": "{0},{1}", "matrix": [["1/2"]]}],
    "product": [{"left": ["{0},{1}", 0], "right": ["{0},{1}", 0], "terms": [[1, "{0},{1}", 0]]},
                {"left": ["{0},{1}", 0], "right": ["{0,1}", 0], "terms": [[1, "{0,1}", 0]]},
                {"left": ["{0,1}", 0], "right": ["{0},{1}", 0], "terms": [[1, "{0,1}", 0]]}]
  })");
  auto C = presheaf_from_json<Rational>(P, j);
  EXPECT_EQ(C.cover_map((*P->top()), (*P->bottom()))(0, 0), Rational(1, 2));
  EXPECT_TRUE(C.monoidal());
  // the top class squares to zero, which breaks compatibility with f(1) = 1/2
  EXPECT_FALSE(validate(C));
  EXPECT_THROW(presheaf_from_json<Rational>(P, nlohmann::json::parse(R"({"spaces":[{"element":"x","degrees":[]}]})")),
               Error);
}

TEST(DiagonalPresheaf, GradingIsThomShiftedTensorPower) {
  for (const char* name : {"s1", "cp1", "elliptic", "s1xr"}) {
    const auto M = load_manifold(name);
    for (const auto& G : fixtures::graphs_up_to(4)) {
      auto check = [&](const auto& D) {
        const auto& P = D.presheaf.poset();
        for (std::size_t p = 0; p < P.size(); ++p) {
          const auto& part = D.bond->partitions[p];
          LaurentPoly2 expected = LaurentPoly2::t_pow(M.real_dim * part.rank()) * M.poincare().pow(part.block_count());
          LaurentPoly2 got;
          for (int d : D.presheaf.space(p).degrees) got += LaurentPoly2::t_pow(d);
          EXPECT_EQ(got, expected) << name << " " << G.encoding() << " " << P.label(p);
        }
      };
      if (M.field == FieldTag::GF2)
        check(diagonal_presheaf<Gf2>(M, G));
      else
        check(diagonal_presheaf<Rational>(M, G));
    }
  }
}

TEST(DiagonalPresheaf, CP1CoverMapIsPushforward) {
  const auto D = diagonal_presheaf<Rational>(load_manifold("cp1"), SimpleGraph::complete(2));
  const auto& P = D.presheaf.poset();
  const auto& f = D.presheaf.cover_map((*P.top()), (*P.bottom()));
  // top stalk basis (1, w); bottom stalk basis 1|1, 1|w, w|1, w|w
  EXPECT_EQ(f, Matrix<Rational>::from_rows({{Rational(0), Rational(0)},
                                            {Rational(1), Rational(0)},
                                            {Rational(1), Rational(0)},
                                            {Rational(0), Rational(1)}},
                                           2));
  EXPECT_EQ(D.presheaf.space((*P.bottom())).labels[1], "u|1|w");
}

TEST(DiagonalPresheaf, ZeroDiagonalGivesZeroMaps) {
  const auto M = load_manifold("r2");
  const auto D = diagonal_presheaf<Gf2>(M, SimpleGraph::complete(4));
  for (const auto& c : D.presheaf.poset().covers()) EXPECT_TRUE(D.presheaf.cover_map(c.upper, c.lower).is_zero());
}

TEST(DiagonalPresheaf, ThomProducts) {
  const auto D = diagonal_presheaf<Gf2>(load_manifold("r2"), SimpleGraph::complete(3));
  const auto& P = D.presheaf.poset();
  const auto atoms = P.atoms();
  EXPECT_EQ(D.presheaf.multiply(unit_at<Gf2>(atoms[0]), unit_at<Gf2>(atoms[1])), unit_at<Gf2>((*P.top())));
  for (std::size_t p = 0; p < P.size(); ++p)
    if (p != (*P.bottom())) {
      EXPECT_TRUE(D.presheaf.multiply(unit_at<Gf2>(p), unit_at<Gf2>(p)).empty()) << P.label(p);
    }
  EXPECT_EQ(D.presheaf.multiply(unit_at<Gf2>((*P.bottom())), unit_at<Gf2>(atoms[2])), unit_at<Gf2>(atoms[2]));
}

TEST(DiagonalPresheaf, SelfProductCarriesEulerClass) {
  const auto D = diagonal_presheaf<Rational>(load_manifold("cp1"), SimpleGraph::complete(2));
  const auto& P = D.presheaf.poset();
  // u * u = u (x) e(TM) = 2 u (x) w
  EXPECT_EQ(D.presheaf.multiply(unit_at<Rational>((*P.top())), unit_at<Rational>((*P.top()))),
            (Chain<Rational>{{{(*P.top()), 1}, Rational(2)}}));
}

TEST(DiagonalPresheaf, Rejections) {
  auto M = load_manifold("cp1");
  M.diagonal_class.reset();
  EXPECT_THROW(diagonal_presheaf<Rational>(M, SimpleGraph::complete(2)), ValidationError);
  auto odd = ManifoldData::from_betti(1, {1, 1}, FieldTag::Q);
  odd.zero_diagonal = true;
  EXPECT_THROW(diagonal_presheaf<Rational>(odd, SimpleGraph::complete(2)), ValidationError);
  EXPECT_THROW(diagonal_presheaf<Gf2>(load_manifold("r2"), SimpleGraph::complete(5), 10), SizeGuardError);
}

TEST(DiagonalPresheaf, S1OverK3IsValidMonoidal) {
  const auto D = diagonal_presheaf<Gf2>(load_manifold("s1"), SimpleGraph::complete(3));
  const auto v = validate(D.presheaf, {.associativity = true, .graded_commutativity = true});
  EXPECT_TRUE(v) << v.certificate;
}

TEST(DiagonalPresheaf, ValidOnAllSmallGraphs) {
  const auto start = std::chrono::steady_clock::now();
  for (const char* name : {"s1", "r2", "s1xr", "cp1", "elliptic"}) {
    const auto M = load_manifold(name);
    for (const auto& G : fixtures::graphs_up_to(name == std::string("elliptic") ? 3 : 4)) {
      Verdict v;
      if (M.field == FieldTag::GF2)
        v = validate(diagonal_presheaf<Gf2>(M, G).presheaf);
      else
        v = validate(diagonal_presheaf<Rational>(M, G).presheaf);
      EXPECT_TRUE(v) << name << " " << G.encoding() << ": " << v.certificate;
    }
  }
  RecordProperty("seconds", std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
}

TEST(DiagonalPresheaf, ProjectiveCompositesArePathIndependent) {
  const auto D = diagonal_presheaf<Rational>(load_manifold("cp1"), SimpleGraph::complete(4));
  CompositeTable<Rational> f(D.presheaf);
  EXPECT_TRUE(f.verdict()) << f.verdict().certificate;
  const auto& P = D.presheaf.poset();
  EXPECT_FALSE(f((*P.top()), (*P.bottom())).is_zero());
}
