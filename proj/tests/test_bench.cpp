#include <gtest/gtest.h>

#include <sstream>

#include "regbmm/bench.hpp"

using namespace regbmm;

TEST(Bench, HeaderAndRows) {
  BenchConfig cfg;
  cfg.sizes = {16, 24};
  cfg.seeds = {1, 2, 3};
  const auto rows = run_bench(cfg);
  EXPECT_EQ(rows.size(), cfg.sizes.size() * cfg.seeds.size() * cfg.engines.size());
  std::ostringstream out;
  write_bench_csv(out, rows);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "engine,n,density,seed,wall_ns,triangles,pieces");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<std::ptrdiff_t>(rows.size() + 1));
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Bench, EnginesAgreeOnCounts) {
  BenchConfig cfg;
  cfg.engines = {"naive", "four-russians", "list"};
  cfg.sizes = {20};
  cfg.seeds = {5};
  const auto rows = run_bench(cfg);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[0].triangles, rows[1].triangles);
  EXPECT_EQ(rows[1].triangles, rows[2].triangles);
}

TEST(Bench, DeterministicWithoutTiming) {
  BenchConfig cfg;
  cfg.sizes = {16};
  cfg.seeds = {1, 2};
  cfg.jobs = 3;
  std::ostringstream a;
  std::ostringstream b;
  write_bench_csv(a, run_bench(cfg), false);
  write_bench_csv(b, run_bench(cfg), false);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Bench, UnknownEngine) {
  BenchConfig cfg;
  cfg.engines = {"quantum"};
  EXPECT_THROW(run_bench(cfg), std::invalid_argument);
}
