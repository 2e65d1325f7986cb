#include <gtest/gtest.h>

#include "regbmm/random.hpp"
#include "regbmm/sampler.hpp"

using namespace regbmm;

namespace {

std::vector<std::vector<double>> random_boolean_functions(std::size_t ground, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> fs(count, std::vector<double>(ground));
  for (auto& f : fs) {
    // a per-function bias keeps the truth spread over [0,1]
    const std::uint64_t bias = 1 + rng.below(15);
    for (auto& v : f) v = rng.bernoulli(bias, 16) ? 1.0 : 0.0;
  }
  return fs;
}

}  // namespace

TEST(Sampler, ExhaustiveFamily) {
  const SamplerFamily fam = exhaustive_family(5);
  ASSERT_EQ(fam.size(), 1U);
  EXPECT_EQ(fam.sets[0], (std::vector<Index>{0, 1, 2, 3, 4}));
  std::vector<double> evens{1, 0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(fam.estimate(0, evens), 3.0 / 5.0);
  const auto rep = validate_sampler(exhaustive_family(40), random_boolean_functions(40, 100, 1));
  EXPECT_EQ(rep.max_err_fraction, 0.0);
  EXPECT_LT(rep.max_abs_error, 1e-12);
  EXPECT_THROW(exhaustive_family(0), std::invalid_argument);
}

TEST(Sampler, SizesWithinBounds) {
  const SamplerFamily fam = build_sampler(16, Rational(1, 2), Rational(1, 2), 3);
  EXPECT_EQ(fam.kind, SamplerKind::PairwiseHash);
  EXPECT_EQ(fam.size(), 64U);
  for (const auto& s : fam.sets) {
    EXPECT_EQ(s.size(), chebyshev_member_size(Rational(1, 2), Rational(1, 2)));
    for (Index i : s) EXPECT_LT(i, 16U);
  }
  EXPECT_EQ(chebyshev_member_size(Rational(1, 2), Rational(1, 2)), 4U);
}

TEST(Sampler, SmallGroundFallsBackToExhaustive) {
  const SamplerFamily fam = build_sampler(10, Rational(1, 10), Rational(1, 10), 3);
  EXPECT_EQ(fam.kind, SamplerKind::Exhaustive);
  EXPECT_EQ(fam.size(), 1U);
}

TEST(Sampler, ConstantFunctionExact) {
  const SamplerFamily fam = build_sampler(256, Rational(1, 4), Rational(1, 4), 9);
  const std::vector<double> f(256, 0.375);
  for (std::size_t m = 0; m < fam.size(); ++m) EXPECT_DOUBLE_EQ(fam.estimate(m, f), 0.375);
  SamplerFamily singletons;
  singletons.ground_size = 256;
  singletons.epsilon = Rational(1, 4);
  for (Index i = 0; i < 8; ++i) singletons.sets.push_back({i});
  EXPECT_EQ(validate_sampler(singletons, {f}).max_err_fraction, 0.0);
}

TEST(Sampler, FailureFractionAtMostDelta) {
  const Rational eps(1, 4);
  const Rational delta(1, 4);
  const SamplerFamily fam = build_sampler(256, eps, delta, 2024);
  ASSERT_EQ(fam.kind, SamplerKind::PairwiseHash);
  const auto rep = validate_sampler(fam, random_boolean_functions(256, 1000, 77));
  EXPECT_LE(rep.max_err_fraction, to_double(delta));
}

TEST(Sampler, Deterministic) {
  const auto a = build_sampler(300, Rational(1, 5), Rational(1, 3), 42);
  const auto b = build_sampler(300, Rational(1, 5), Rational(1, 3), 42);
  const auto c = build_sampler(300, Rational(1, 5), Rational(1, 3), 43);
  EXPECT_EQ(a.sets, b.sets);
  EXPECT_NE(a.sets, c.sets);
}

TEST(Sampler, InvalidParameters) {
  EXPECT_THROW(build_sampler(0, Rational(1, 2), Rational(1, 2), 1), std::invalid_argument);
  EXPECT_THROW(build_sampler(10, Rational(0), Rational(1, 2), 1), std::invalid_argument);
  EXPECT_THROW(build_sampler(10, Rational(1, 2), Rational(1), 1), std::invalid_argument);
  EXPECT_THROW(build_sampler(10, Rational(1, 2), Rational(1, 2), 1, 0), std::invalid_argument);
}

TEST(Sampler, MersenneArithmetic) {
  EXPECT_EQ(mulmod61(kMersenne61 - 1, kMersenne61 - 1), 1U);
  EXPECT_EQ(mulmod61(0, 123), 0U);
  EXPECT_EQ(mulmod61(std::uint64_t{1} << 60, 2), 1U);
}
