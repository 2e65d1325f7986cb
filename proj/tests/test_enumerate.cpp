#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "regbmm/enumerate.hpp"
#include "regbmm/random.hpp"

using namespace regbmm;

namespace {

std::vector<Triangle> drain_sorted(Enumerator& e) {
  auto v = enumerate_all(e);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Triangle> sorted_oracle(const TripartiteGraph& g) {
  auto t = oracle::triangles(g);
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

TEST(Enumerate, NoTriangles) {
  Rng rng(1);
  Enumerator e(split_triangle_free_graph(30, Rational(1, 2), rng), EnumConfig{});
  EXPECT_FALSE(e.next().has_value());
  EXPECT_FALSE(e.next().has_value());
}

TEST(Enumerate, CompleteThreeByThreeByThree) {
  const BoolMatrix ones = BoolMatrix::ones(3, 3);
  Enumerator e(TripartiteGraph(ones, ones, ones), EnumConfig{});
  std::vector<Triangle> got;
  for (int i = 0; i < 27; ++i) {
    auto t = e.next();
    ASSERT_TRUE(t.has_value()) << i;
    got.push_back(*t);
  }
  EXPECT_FALSE(e.next().has_value());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(std::adjacent_find(got.begin(), got.end()), got.end());
  EXPECT_EQ(got.size(), 27U);
}

TEST(Enumerate, RandomMatchesOracleWithinBudget) {
  for (unsigned seed = 1; seed <= 12; ++seed) {
    Rng rng(seed);
    const std::size_t n = 8 + rng.below(80);
    const TripartiteGraph g = random_graph(n, n, n, Rational(1 + rng.below(9), 10), rng);
    EnumConfig cfg;
    cfg.budget = 4 + seed % 6;
    Enumerator e(g, cfg);
    EXPECT_EQ(drain_sorted(e), sorted_oracle(g)) << seed;
    EXPECT_LE(e.stats().max_steps, cfg.budget) << seed;
    EXPECT_EQ(e.stats().budget_overruns, 0U);
  }
}

TEST(Enumerate, HeavySubgraphsAreInterleaved) {
  const BoolMatrix ones = BoolMatrix::ones(36, 36);
  Enumerator e(TripartiteGraph(ones, ones, ones), EnumConfig{});
  EXPECT_GT(e.stats().heavy, 1U);
  EXPECT_EQ(drain_sorted(e).size(), 36U * 36 * 36);
  EXPECT_LE(e.stats().max_steps, e.budget());
}

TEST(Enumerate, SampledCountingStillExact) {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    Rng rng(seed + 50);
    const TripartiteGraph g = random_graph(40, 40, 40, Rational(1, 2), rng);
    EnumConfig cfg;
    cfg.counting = CountingBackend::Sampled;
    cfg.seed = seed;
    Enumerator e(g, cfg);
    EXPECT_EQ(drain_sorted(e), sorted_oracle(g));
  }
}

TEST(Enumerate, BudgetTooSmall) {
  const BoolMatrix ones = BoolMatrix::ones(2, 2);
  EnumConfig cfg;
  cfg.budget = 3;
  EXPECT_THROW(Enumerator(TripartiteGraph(ones, ones, ones), cfg), std::invalid_argument);
}
