#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regbmm/random.hpp"
#include "regbmm/sift.hpp"

using namespace regbmm;

namespace {

// Both size and density guarantees of a denser rectangle, rechecked from scratch.
void expect_denser(const BoolMatrix& a, const SiftOutcome& s, const Rational& eps, unsigned k, unsigned l) {
  ASSERT_FALSE(s.regular);
  ASSERT_FALSE(s.rows.empty());
  ASSERT_FALSE(s.cols.empty());
  const Rational e = density(a);
  const BoolMatrix sub = submatrix(a, s.rows, s.cols);
  EXPECT_EQ(density(sub), s.achieved_density);
  EXPECT_GE(density(sub), (1 + eps / 2) * e);
  const Rational area(BigInt(s.rows.size()) * s.cols.size());
  EXPECT_GE(area, eps / 16 * rpow(e, k * l) * Rational(BigInt(a.rows()) * a.cols()));
}

void expect_regular(const BoolMatrix& a, const Rational& eps, unsigned k, unsigned l) {
  EXPECT_LE(oracle::grid_norm_power(a, k, l), rpow((1 + eps) * density(a), k * l));
}

}  // namespace

TEST(Sift, TrivialInputs) {
  EXPECT_TRUE(sift(BoolMatrix::ones(8, 8), Rational(1, 10), 2, 2).regular);
  EXPECT_TRUE(sift(BoolMatrix(8, 8), Rational(1, 10), 2, 2).regular);
  EXPECT_THROW(sift(BoolMatrix(0, 3), Rational(1, 10), 2, 2), EmptyMatrixError);
  EXPECT_THROW(sift(BoolMatrix::ones(2, 2), Rational(0), 2, 2), std::invalid_argument);
  EXPECT_THROW(sift(BoolMatrix::ones(2, 2), Rational(1, 2), 0, 2), std::invalid_argument);
}

TEST(Sift, BlockDiagonalIsNotRegular) {
  const BoolMatrix a = block_diagonal(16, 2);
  RegularityParams p;
  p.epsilon = Rational(1, 10);
  EXPECT_FALSE(is_regular(a, p));
  const SiftOutcome s = sift(a, Rational(1, 10), 2, 2);
  expect_denser(a, s, Rational(1, 10), 2, 2);
}

TEST(Sift, RandomHalfDensity) {
  const BoolMatrix a = random_matrix(64, 64, Rational(1, 2), 21);
  const SiftOutcome s = sift(a, Rational(1, 2), 2, 2);
  if (s.regular) {
    EXPECT_LE(grid_norm_exact(a, 2, 2).power, rpow(Rational(3, 2) * density(a), 4));
  } else {
    expect_denser(a, s, Rational(1, 2), 2, 2);
  }
}

TEST(Sift, SoundOnSmallMatrices) {
  std::size_t regular = 0;
  std::size_t denser = 0;
  for (unsigned seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    const BoolMatrix a = random_matrix(6, 6, Rational(1 + rng.below(7), 8), rng);
    if (a.count_ones() == 0) continue;
    const Rational eps = rng.bernoulli(1, 2) ? Rational(1, 10) : Rational(1, 2);
    const unsigned k = 1 + static_cast<unsigned>(rng.below(3));
    const unsigned l = 1 + static_cast<unsigned>(rng.below(3));
    const SiftOutcome s = sift(a, eps, k, l);
    if (s.regular) {
      expect_regular(a, eps, k, l);
      ++regular;
    } else {
      expect_denser(a, s, eps, k, l);
      ++denser;
    }
  }
  EXPECT_GT(regular, 0U);
  EXPECT_GT(denser, 0U);
}

TEST(Sift, TransposeReduction) {
  const BoolMatrix a = BoolMatrix::from_strings({"111000", "111000", "111000", "000100", "000010", "000001"});
  const SiftOutcome s = sift(a, Rational(1, 4), 3, 2);
  expect_denser(a, s, Rational(1, 4), 3, 2);
  const SiftOutcome t = sift(transpose(a), Rational(1, 4), 2, 3);
  expect_denser(transpose(a), t, Rational(1, 4), 2, 3);
  EXPECT_EQ(s.rows, t.cols);
  EXPECT_EQ(s.cols, t.rows);
}

TEST(SiftPrime, HighDegreeRowsReturnedDirectly) {
  // Rows 0..3 have degree 1, rows 4..7 degree 1/8.
  BoolMatrix a(8, 8);
  for (std::size_t x = 0; x < 8; ++x) {
    for (std::size_t y = 0; y < 8; ++y) a.set(x, y, x < 4 || y == x);
  }
  const SiftOutcome s = sift_prime(a, Rational(1, 2), Rational(1, 4), 2, 2);
  ASSERT_FALSE(s.regular);
  EXPECT_EQ(s.rows, IndexSet({0, 1, 2, 3}));
  EXPECT_EQ(s.cols, IndexSet::range(8));
  EXPECT_EQ(s.achieved_density, Rational(1));
}

TEST(SiftPrime, KOneWithoutHighRowsIsRegular) {
  const SiftOutcome s = sift_prime(BoolMatrix::identity(8), Rational(1, 2), Rational(1, 4), 1, 3);
  EXPECT_TRUE(s.regular);
}

TEST(SiftPrime, IdentityRecursesIntoOneColumn) {
  // deg = 1/16 < delta = 1/8, but delta^2 = 1/64 <= 1/16, so row 0 is selected
  // and the recursion sees the 16x1 column whose row 0 has degree 1.
  const SiftOutcome s = sift_prime(BoolMatrix::identity(16), Rational(1, 8), Rational(1, 2), 2, 2);
  ASSERT_FALSE(s.regular);
  EXPECT_EQ(s.rows, IndexSet({0}));
  EXPECT_EQ(s.cols, IndexSet({0}));
  EXPECT_EQ(s.achieved_density, Rational(1));
}

TEST(SiftPrime, InvalidParameters) {
  EXPECT_THROW(sift_prime(BoolMatrix::ones(2, 2), Rational(0), Rational(1, 2), 2, 2), std::invalid_argument);
  EXPECT_THROW(sift_prime(BoolMatrix::ones(2, 2), Rational(1, 2), Rational(-1), 2, 2), std::invalid_argument);
}
