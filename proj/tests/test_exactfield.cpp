#include <random>

#include <gtest/gtest.h>

#include "osa/field.hpp"
#include "osa/matrix.hpp"
#include "test_util.hpp"

using namespace osa;

TEST(Rank, IdentityOverRationals) { EXPECT_EQ(rank(Matrix<Rational>::identity(2)), 2u); }

TEST(Rank, ZeroMatrix) { EXPECT_EQ(rank(Matrix<Rational>(3, 4)), 0u); }

TEST(Rank, DependentRows) {
  auto m = Matrix<Rational>::from_rows({{1, 2}, {2, 4}}, 2);
  EXPECT_EQ(rank(m), 1u);
}

TEST(Rank, EmptyMatrix) {
  EXPECT_EQ(rank(Matrix<Rational>(0, 5)), 0u);
  EXPECT_EQ(rank(Matrix<Gf2>(4, 0)), 0u);
}

TEST(Kernel, Identity) { EXPECT_TRUE(kernel_basis(Matrix<Rational>::identity(2)).empty()); }

TEST(Kernel, ZeroRow) { EXPECT_EQ(kernel_basis(Matrix<Rational>(1, 3)).size(), 3u); }

TEST(Kernel, Gf2AllOnesRow) {
  auto m = Matrix<Gf2>::from_rows({{Gf2(1), Gf2(1)}}, 2);
  auto k = kernel_basis(m);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (Vector<Gf2>{Gf2(1), Gf2(1)}));
}

TEST(Quotient, OneImageVector) {
  auto reps = quotient_basis<Rational>(2, {{1, 0}});
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0], (Vector<Rational>{0, 1}));
}

TEST(Quotient, EmptyImage) { EXPECT_EQ(quotient_basis<Rational>(3, {}).size(), 3u); }

TEST(Quotient, Gf2Diagonal) {
  auto reps = quotient_basis<Gf2>(2, {{Gf2(1), Gf2(1)}});
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0], (Vector<Gf2>{Gf2(1), Gf2(0)}));
}

TEST(Rational, CanonicalForm) {
  auto r = make_rational(2, -6);
  EXPECT_EQ(r.get_str(), "-1/3");
  EXPECT_EQ(parse_rational("4/8").get_str(), "1/2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Rational, SumComputedTwoWays) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (b == 0 || e == 0) continue;
    Rational lhs = make_rational(a, b) + make_rational(c, e);
    Rational rhs = make_rational(a * e + c * b, b * e);
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(lhs.get_str(), rhs.get_str());
  }
}

TEST(Gf2, Arithmetic) {
  EXPECT_EQ(Gf2(1) + Gf2(1), Gf2(0));
  EXPECT_EQ(Gf2(3), Gf2(1));
  EXPECT_EQ(-Gf2(1), Gf2(1));
  EXPECT_THROW(Gf2(1) / Gf2(0), Error);
}

template <class F>
class LinearAlgebraProperties : public ::testing::Test {};
using Fields = ::testing::Types<Rational, Gf2>;
TYPED_TEST_SUITE(LinearAlgebraProperties, Fields);

TYPED_TEST(LinearAlgebraProperties, RankNullity) {
  using F = TypeParam;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t rows = rng() % 7, cols = 1 + rng() % 7;
    auto m = fixtures::random_matrix<F>(rng, rows, cols);
    auto k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.size(), cols);
    for (const auto& v : k) {
      auto img = m.apply(v);
      for (const auto& x : img) EXPECT_TRUE(is_zero(x));
    }
  }
}

TYPED_TEST(LinearAlgebraProperties, QuotientSize) {
  using F = TypeParam;
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t dim = 1 + rng() % 6, count = rng() % 6;
    auto m = fixtures::random_matrix<F>(rng, count, dim);
    std::vector<Vector<F>> image;
    for (std::size_t i = 0; i < count; ++i) image.push_back(m.row(i));
    auto reps = quotient_basis<F>(dim, image);
    EXPECT_EQ(reps.size(), dim - rank(m));
  }
}

TYPED_TEST(LinearAlgebraProperties, SpanCoordinatesReconstruct) {
  using F = TypeParam;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng() % 6;
    SpanReducer<F> span(dim, true);
    std::vector<Vector<F>> accepted;
    for (int k = 0; k < 5; ++k) {
      auto v = fixtures::random_matrix<F>(rng, 1, dim).row(0);
      if (span.add(v)) accepted.push_back(v);
    }
    EXPECT_EQ(span.rank(), accepted.size());
    // a random combination of accepted vectors has those coordinates back
    Vector<F> combo(accepted.size());
    Vector<F> target(dim, F(0));
    for (std::size_t a = 0; a < accepted.size(); ++a) {
      combo[a] = fixtures::random_scalar<F>(rng);
      for (std::size_t j = 0; j < dim; ++j) target[j] += combo[a] * accepted[a][j];
    }
    auto coords = span.coordinates(target);
    ASSERT_TRUE(coords.has_value());
    EXPECT_EQ(*coords, combo);
  }
}

TYPED_TEST(LinearAlgebraProperties, RrefIsIdempotent) {
  using F = TypeParam;
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = fixtures::random_matrix<F>(rng, 1 + rng() % 5, 1 + rng() % 5);
    auto once = rref(m);
    auto twice = rref(once.reduced);
    EXPECT_EQ(once.reduced, twice.reduced);
    EXPECT_EQ(once.pivots, twice.pivots);
  }
}
