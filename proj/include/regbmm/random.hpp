#pragma once

// Seeded generators. Bounded draws use rejection sampling on top of
// mt19937_64 so the streams are identical across standard libraries.

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "bitmatrix.hpp"
#include "rational.hpp"

namespace regbmm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
  }

  /// True with probability num/den.
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

inline std::pair<std::uint64_t, std::uint64_t> small_fraction(const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
  const BigInt num = numerator_of(p);
  const BigInt den = denominator_of(p);
  if (den > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw std::invalid_argument("probability denominator too large");
  }
  return {num.convert_to<std::uint64_t>(), den.convert_to<std::uint64_t>()};
}

/// Each entry is 1 independently with probability p.
inline BoolMatrix random_matrix(std::size_t rows, std::size_t cols, const Rational& p, Rng& rng) {
  const auto [num, den] = small_fraction(p);
  BoolMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (rng.bernoulli(num, den)) m.set(r, c);
    }
  }
  return m;
}

inline BoolMatrix random_matrix(std::size_t rows, std::size_t cols, const Rational& p, std::uint64_t seed) {
  Rng rng(seed);
  return random_matrix(rows, cols, p, rng);
}

inline TripartiteGraph random_graph(std::size_t nx, std::size_t ny, std::size_t nz, const Rational& p, Rng& rng) {
  BoolMatrix a = random_matrix(nx, ny, p, rng);
  BoolMatrix b = random_matrix(ny, nz, p, rng);
  BoolMatrix c = random_matrix(nx, nz, p, rng);
  return TripartiteGraph(std::move(a), std::move(b), std::move(c));
}

/// n x n matrix with `blocks` all-ones diagonal blocks of near-equal size.
inline BoolMatrix block_diagonal(std::size_t n, std::size_t blocks) {
  if (blocks == 0) throw std::invalid_argument("block_diagonal: zero blocks");
  BoolMatrix m(n, n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * n / blocks;
    const std::size_t hi = (b + 1) * n / blocks;
    for (std::size_t r = lo; r < hi; ++r) {
      for (std::size_t c = lo; c < hi; ++c) m.set(r, c);
    }
  }
  return m;
}

/// Random graph with one triangle forced at a seeded position.
inline TripartiteGraph planted_triangle_graph(std::size_t nx, std::size_t ny, std::size_t nz, const Rational& p,
                                              Rng& rng) {
  if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("planted triangle needs nonempty parts");
  TripartiteGraph g = random_graph(nx, ny, nz, p, rng);
  const auto x = static_cast<std::size_t>(rng.below(nx));
  const auto y = static_cast<std::size_t>(rng.below(ny));
  const auto z = static_cast<std::size_t>(rng.below(nz));
  g.a.set(x, y);
  g.b.set(y, z);
  g.c.set(x, z);
  return g;
}

/// Triangle-free graph with dense random edge parts: A only touches the first
/// half of Y and B only the second half.
inline TripartiteGraph split_triangle_free_graph(std::size_t n, const Rational& p, Rng& rng) {
  const auto [num, den] = small_fraction(p);
  const std::size_t half = n / 2;
  BoolMatrix a(n, n);
  BoolMatrix b(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < half; ++y) {
      if (rng.bernoulli(num, den)) a.set(x, y);
    }
  }
  for (std::size_t y = half; y < n; ++y) {
    for (std::size_t z = 0; z < n; ++z) {
      if (rng.bernoulli(num, den)) b.set(y, z);
    }
  }
  BoolMatrix c = random_matrix(n, n, p, rng);
  return TripartiteGraph(std::move(a), std::move(b), std::move(c));
}

// A and B link matching halves, C links opposite halves, so no triangle closes
// while every y still has neighbours on both sides.
inline TripartiteGraph crossed_triangle_free_graph(std::size_t n, const Rational& p, Rng& rng) {
  const auto [num, den] = small_fraction(p);
  const std::size_t half = n / 2;
  BoolMatrix a(n, n);
  BoolMatrix b(n, n);
  BoolMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((i < half) == (j < half) && rng.bernoulli(num, den)) a.set(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((i < half) == (j < half) && rng.bernoulli(num, den)) b.set(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((i < half) != (j < half) && rng.bernoulli(num, den)) c.set(i, j);
    }
  }
  return TripartiteGraph(std::move(a), std::move(b), std::move(c));
}

}  // namespace regbmm
