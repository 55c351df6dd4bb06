#include <gtest/gtest.h>

#include <random>

#include "cotorsion/linalg.hpp"
#include "support/oracles.hpp"

using namespace cotorsion;

namespace {

FieldMatrix random_matrix(std::mt19937_64& rng, Residue p, std::size_t r, std::size_t c) {
  FieldMatrix m(p, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = static_cast<Residue>(rng() % p);
  return m;
}

IntegerMatrix ints(const std::vector<std::vector<long long>>& rows, std::size_t cols = 0) {
  return IntegerMatrix::from_rows(rows, cols);
}

std::vector<long> to_long(const std::vector<BigInt>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.convert_to<long>());
  return out;
}

}  // namespace

TEST(Rref, IdentityIsFixed) {
  auto r = rref(FieldMatrix::identity(2, 2));
  EXPECT_EQ(r.matrix, FieldMatrix::identity(2, 2));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, AllOnes) {
  auto r = rref(FieldMatrix::from_rows(2, {{1, 1}, {1, 1}}));
  EXPECT_EQ(r.matrix, FieldMatrix::from_rows(2, {{1, 1}, {0, 0}}));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Rref, ZeroMatrix) {
  auto r = rref(FieldMatrix(2, 3, 2));
  EXPECT_TRUE(r.matrix.is_zero());
  EXPECT_TRUE(r.pivots.empty());
}

TEST(Rref, RankMatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (Residue p : {2u, 3u, 5u, 7u})
    for (int t = 0; t < 200; ++t) {
      auto m = random_matrix(rng, p, 1 + rng() % 5, 1 + rng() % 5);
      auto r = rref(m);
      EXPECT_EQ(r.pivots.size(), oracle::rank(m));
      // rows of the reduced form span the same space
      EXPECT_EQ(oracle::rank(vstack(m, r.matrix)), r.pivots.size());
      for (std::size_t k = 0; k < r.pivots.size(); ++k) EXPECT_EQ(r.matrix.at(k, r.pivots[k]), 1u);
    }
}

TEST(Solve, IdentityReturnsRhs) {
  auto b = FieldMatrix::from_rows(3, {{1, 2}, {0, 1}});
  auto x = solve(FieldMatrix::identity(3, 2), b);
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, b);
}

TEST(Solve, UnderdeterminedOverF2) {
  auto a = FieldMatrix::from_rows(2, {{1, 1}});
  auto b = FieldMatrix::from_rows(2, {{1}});
  auto x = solve(a, b);
  ASSERT_TRUE(x);
  // both (1,0) and (0,1) are valid
  EXPECT_EQ(a * *x, b);
}

TEST(Solve, ZeroSystemWithNonzeroRhs) {
  EXPECT_FALSE(solve(FieldMatrix(2, 2, 2), FieldMatrix::from_rows(2, {{1}, {0}})));
}

TEST(Solve, SolutionsCheckAndUnsolvableAgreesWithRank) {
  std::mt19937_64 rng(12);
  for (Residue p : {2u, 3u, 5u})
    for (int t = 0; t < 200; ++t) {
      auto a = random_matrix(rng, p, 1 + rng() % 4, 1 + rng() % 4);
      auto b = random_matrix(rng, p, a.rows(), 1 + rng() % 2);
      auto x = solve(a, b);
      const bool consistent = oracle::rank(a) == oracle::rank(hstack(a, b));
      EXPECT_EQ(x.has_value(), consistent);
      if (x) EXPECT_EQ(a * *x, b);
    }
}

TEST(Kernel, Identity) { EXPECT_EQ(kernel_basis(FieldMatrix::identity(2, 3)).cols(), 0u); }

TEST(Kernel, RowOfOnes) {
  auto k = kernel_basis(FieldMatrix::from_rows(2, {{1, 1}}));
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k.column(0), (Vector{1, 1}));
}

TEST(Kernel, ZeroMatrixGivesFullSpace) {
  auto k = kernel_basis(FieldMatrix(3, 3, 3));
  EXPECT_EQ(k.cols(), 3u);
  EXPECT_EQ(oracle::rank(k), 3u);
}

TEST(Kernel, RankNullityOnRandomMatrices) {
  std::mt19937_64 rng(13);
  for (Residue p : {2u, 3u, 5u})
    for (int t = 0; t < 200; ++t) {
      auto m = random_matrix(rng, p, 1 + rng() % 5, 1 + rng() % 5);
      auto k = kernel_basis(m);
      EXPECT_EQ(k.cols() + oracle::rank(m), m.cols());
      if (k.cols()) {
        EXPECT_TRUE((m * k).is_zero());
        EXPECT_EQ(oracle::rank(k), k.cols());
      }
    }
}

TEST(Inverse, RoundTrip) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(rng, 5, 3, 3);
    auto inv = inverse(m);
    EXPECT_EQ(inv.has_value(), oracle::rank(m) == 3);
    if (inv) EXPECT_EQ(m * *inv, FieldMatrix::identity(5, 3));
  }
}

TEST(Smith, OneByOne) { EXPECT_EQ(to_long(smith_invariant_factors(ints({{2}}))), (std::vector<long>{2})); }

TEST(Smith, TwoByTwo) {
  EXPECT_EQ(to_long(smith_invariant_factors(ints({{4, 2}, {2, 2}}))), (std::vector<long>{2, 2}));
}

TEST(Smith, ZeroRowGivesFreeCokernel) {
  auto f = smith_invariant_factors(ints({{0, 0}}));
  EXPECT_EQ(to_long(f), (std::vector<long>{0, 0}));
  EXPECT_EQ(describe_group(f), "Z^2");
}

TEST(Smith, DescribeGroup) {
  EXPECT_EQ(describe_group({1, 2, 0}), "Z/2 + Z");
  EXPECT_EQ(describe_group({1, 1}), "0");
  EXPECT_EQ(describe_group({3}), "Z/3");
}

TEST(Smith, AgreesWithDeterminantalDivisors) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    std::vector<std::vector<long long>> rows(r, std::vector<long long>(c));
    std::vector<std::vector<long>> lrows(r, std::vector<long>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) lrows[i][j] = rows[i][j] = static_cast<long long>(rng() % 13) - 6;
    EXPECT_EQ(to_long(smith_invariant_factors(ints(rows, c))), oracle::smith_by_minors(lrows, c));
  }
}

TEST(Smith, DivisibilityChain) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    std::vector<std::vector<long long>> rows(r, std::vector<long long>(c));
    for (auto& row : rows)
      for (auto& x : row) x = static_cast<long long>(rng() % 21) - 10;
    auto f = smith_invariant_factors(ints(rows, c));
    ASSERT_EQ(f.size(), c);
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      if (f[k + 1] == 0) continue;
      ASSERT_NE(f[k], 0);
      EXPECT_EQ(f[k + 1] % f[k], 0);
    }
  }
}

TEST(Lattice, ContainmentAndEquality) {
  auto a = ints({{2, 0}, {0, 1}});
  auto b = ints({{4, 0}, {0, 3}});
  EXPECT_TRUE(lattice_contains(a, b));
  EXPECT_FALSE(lattice_contains(b, a));
  EXPECT_TRUE(lattice_equal(a, ints({{2, 1}, {0, 1}})));
}

TEST(Errors, ShapeMismatchThrows) {
  EXPECT_THROW(FieldMatrix(2, 2, 2) + FieldMatrix(2, 2, 3), DimensionMismatch);
  EXPECT_THROW(FieldMatrix(2, 2, 3) * FieldMatrix(2, 2, 2), DimensionMismatch);
  EXPECT_THROW(require_prime(4), MalformedInput);
}
