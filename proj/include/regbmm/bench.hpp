#pragma once

// Benchmark harness: runs triangle engines over seeded random graphs and
// reports median wall-clock times as CSV.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "random.hpp"
#include "rational.hpp"
#include "triangle.hpp"

namespace regbmm {

inline constexpr const char* kBenchHeader = "engine,n,density,seed,wall_ns,triangles,pieces";

inline const std::vector<std::string>& bench_engines() {
  static const std::vector<std::string> engines{"naive", "four-russians", "list", "detect"};
  return engines;
}

struct BenchConfig {
  std::vector<std::string> engines = bench_engines();
  std::vector<std::size_t> sizes{32, 64};
  std::vector<Rational> densities{Rational(1, 2)};
  std::vector<std::uint64_t> seeds{1};
  unsigned reps = 3;
  unsigned jobs = 1;
  Rational epsilon = Rational(1, 160);
  unsigned d = 3;
};

struct BenchRow {
  std::string engine;
  std::size_t n = 0;
  Rational density;
  std::uint64_t seed = 0;
  std::uint64_t wall_ns = 0;
  std::uint64_t triangles = 0;
  std::uint64_t pieces = 0;
};

namespace detail {

inline std::pair<std::uint64_t, std::uint64_t> run_engine(const std::string& engine, const TripartiteGraph& g,
                                                         const BenchConfig& cfg) {
  if (engine == "naive") return {naive_count(g), 0};
  if (engine == "four-russians") return {four_russians_count(g, FourRussiansParams::defaults_for(g)), 0};
  if (engine == "list") {
    ListingStats st;
    const auto v = list_triangles(g, ListingParams::desk(std::max({g.nx(), g.ny(), g.nz()})), &st);
    return {v.size(), st.pieces};
  }
  if (engine == "detect") {
    const auto r = detect_triangle(g, cfg.epsilon, cfg.d, false);
    return {r.found ? 1U : 0U, r.pieces};
  }
  throw std::invalid_argument("unknown bench engine: " + engine);
}

}  // namespace detail

inline BenchRow bench_one(const std::string& engine, std::size_t n, const Rational& p, std::uint64_t seed,
                          const BenchConfig& cfg) {
  Rng rng(seed);
  const TripartiteGraph g = random_graph(n, n, n, p, rng);
  BenchRow row{engine, n, p, seed, 0, 0, 0};
  std::vector<std::uint64_t> times;
  for (unsigned r = 0; r < std::max(cfg.reps, 3U); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto [tri, pieces] = detail::run_engine(engine, g, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    if (r > 0 && (tri != row.triangles || pieces != row.pieces)) {
      throw std::logic_error("bench: repeated run disagrees with the first");
    }
    row.triangles = tri;
    row.pieces = pieces;
  }
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
  row.wall_ns = times[times.size() / 2];
  return row;
}

inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  for (const auto& e : cfg.engines) {
    if (std::find(bench_engines().begin(), bench_engines().end(), e) == bench_engines().end()) {
      throw std::invalid_argument("unknown bench engine: " + e);
    }
  }
  struct Task {
    std::string engine;
    std::size_t n;
    Rational p;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& e : cfg.engines) {
    for (auto n : cfg.sizes) {
      for (const auto& p : cfg.densities) {
        for (auto s : cfg.seeds) tasks.push_back({e, n, p, s});
      }
    }
  }
  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = bench_one(tasks[i].engine, tasks[i].n, tasks[i].p, tasks[i].seed, cfg);
      } catch (...) {
        const std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1U, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  std::sort(rows.begin(), rows.end(), [](const BenchRow& l, const BenchRow& r) {
    return std::tie(l.engine, l.n, l.density, l.seed) < std::tie(r.engine, r.n, r.density, r.seed);
  });
  return rows;
}

/// CSV with LF endings and no quoting; timing zeroed when `with_timing` is false.
inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool with_timing = true) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.engine << ',' << r.n << ',' << to_string(r.density) << ',' << r.seed << ','
        << (with_timing ? r.wall_ns : 0) << ',' << r.triangles << ',' << r.pieces << '\n';
  }
}

}  // namespace regbmm
