#pragma once

// 3-SUM: a quadratic oracle and the reduction to triangle listing through
// almost-linear hashing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bitmatrix.hpp"
#include "random.hpp"
#include "triangle.hpp"

namespace regbmm {

struct ThreeSumInstance {
  std::vector<std::int64_t> values;
  /// Declared range [-bound, bound].
  std::int64_t bound = 0;

  void validate() const {
    if (bound < 0 || bound > (std::int64_t{1} << 60)) throw std::invalid_argument("3-SUM: range bound out of range");
    for (auto v : values) {
      if (v < -bound || v > bound) throw std::invalid_argument("3-SUM: value outside the declared range");
    }
  }

  /// Range n^c with n = |values|.
  static ThreeSumInstance with_exponent(std::vector<std::int64_t> values, unsigned c = 3) {
    ThreeSumInstance inst{std::move(values), 0};
    const double b = std::pow(static_cast<double>(std::max<std::size_t>(inst.values.size(), 1)), c);
    inst.bound = static_cast<std::int64_t>(std::min(b, std::ldexp(1.0, 60)));
    inst.validate();
    return inst;
  }

  /// Smallest symmetric range holding every value.
  static ThreeSumInstance tight(std::vector<std::int64_t> values) {
    ThreeSumInstance inst{std::move(values), 0};
    for (auto v : inst.values) inst.bound = std::max(inst.bound, v < 0 ? -v : v);
    inst.validate();
    return inst;
  }
};

struct ThreeSumWitness {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  friend bool operator==(const ThreeSumWitness&, const ThreeSumWitness&) = default;
};

using ThreeSumAnswer = std::optional<ThreeSumWitness>;

inline ThreeSumAnswer solve_3sum_naive(const ThreeSumInstance& inst) {
  std::vector<std::int64_t> v = inst.values;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t lo = i;
    std::size_t hi = v.size() - 1;
    while (lo <= hi) {
      const std::int64_t s = v[i] + v[lo] + v[hi];
      if (s == 0) return ThreeSumWitness{v[i], v[lo], v[hi]};
      if (s < 0) {
        ++lo;
      } else {
        if (hi == 0) break;
        --hi;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hashing

struct LinearHashFn {
  std::uint64_t multiplier = 1;
  unsigned word_bits = 64;
  unsigned bucket_bits = 1;
  /// enc(x) = x + offset, computed modulo 2^64.
  std::uint64_t offset = 0;

  std::uint64_t buckets() const { return std::uint64_t{1} << bucket_bits; }

  std::uint32_t operator()(std::int64_t x) const {
    const std::uint64_t enc = static_cast<std::uint64_t>(x) + offset;
    return static_cast<std::uint32_t>((multiplier * enc) >> (word_bits - bucket_bits));
  }

  void validate() const {
    if ((multiplier & 1U) == 0) throw std::invalid_argument("hash multiplier must be odd");
    if (word_bits != 64 || bucket_bits < 1 || bucket_bits > 20) throw std::invalid_argument("hash: bucket_bits in [1,20]");
  }
};

inline LinearHashFn sample_linear_hash(unsigned bucket_bits, std::uint64_t seed, std::int64_t range_bound = 0) {
  Rng rng(seed);
  LinearHashFn h;
  h.multiplier = rng.next() | 1U;
  h.bucket_bits = bucket_bits;
  h.offset = static_cast<std::uint64_t>(range_bound);
  h.validate();
  return h;
}

/// h(a+b) - h(a) - h(b) + h(0) mod m.
inline std::uint32_t linearity_offset(const LinearHashFn& h, std::int64_t a, std::int64_t b) {
  const std::uint64_t m = h.buckets();
  const std::uint64_t v = h(a + b) + m * 2 - h(a) - h(b) + h(0);
  return static_cast<std::uint32_t>(v % m);
}

/// Offsets {-1, 0, 1} mod m: multiply-shift is additive up to one carry per sum.
inline std::vector<std::uint32_t> analytic_phi(unsigned bucket_bits) {
  const std::uint32_t m = std::uint32_t{1} << bucket_bits;
  std::set<std::uint32_t> s{0, 1 % m, m - 1};
  return {s.begin(), s.end()};
}

/// Offsets observed over random pairs from the range.
inline std::vector<std::uint32_t> measure_phi(const LinearHashFn& h, std::int64_t range_bound, std::size_t pairs,
                                              std::uint64_t seed) {
  Rng rng(seed);
  std::set<std::uint32_t> s;
  const auto width = static_cast<std::uint64_t>(range_bound) * 2 + 1;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto a = static_cast<std::int64_t>(rng.below(width)) - range_bound;
    const auto b = static_cast<std::int64_t>(rng.below(width)) - range_bound;
    s.insert(linearity_offset(h, a, b));
  }
  return {s.begin(), s.end()};
}

/// Fraction of random distinct key pairs landing in the same bucket.
inline double collision_fraction(const LinearHashFn& h, std::int64_t range_bound, std::size_t pairs,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const auto width = static_cast<std::uint64_t>(range_bound) * 2 + 1;
  std::size_t hits = 0;
  std::size_t tried = 0;
  while (tried < pairs) {
    const auto a = static_cast<std::int64_t>(rng.below(width)) - range_bound;
    const auto b = static_cast<std::int64_t>(rng.below(width)) - range_bound;
    if (a == b) continue;
    ++tried;
    hits += h(a) == h(b) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Graph construction

struct LabeledTripartiteGraph {
  TripartiteGraph graph;
  std::uint32_t m = 0;
  std::array<LinearHashFn, 3> h;
  std::vector<std::uint32_t> phi;
  /// Edge (row, col) of A, B, C, keyed row * cols + col, to its labels.
  std::array<std::unordered_map<std::uint64_t, std::vector<std::int64_t>>, 3> labels;

  const std::vector<std::int64_t>* labels_of(int part, std::size_t row, std::size_t col) const {
    const std::size_t cols = part == 0 ? graph.a.cols() : part == 1 ? graph.b.cols() : graph.c.cols();
    auto it = labels[part].find(static_cast<std::uint64_t>(row) * cols + col);
    return it == labels[part].end() ? nullptr : &it->second;
  }

  // X = (x1, x2) with x3 = h3(0); Y = (y1, y3) with y2 = h2(0); Z = (z2, z3) with z1 = h1(0).
  std::size_t x_index(std::uint32_t x1, std::uint32_t x2) const { return std::size_t{x1} * m + x2; }
  std::size_t y_index(std::uint32_t y1, std::uint32_t y3) const { return std::size_t{y1} * m + y3; }
  std::size_t z_index(std::uint32_t z2, std::uint32_t z3) const { return std::size_t{z2} * m + z3; }
  std::array<std::uint32_t, 3> x_coords(std::size_t i) const {
    return {static_cast<std::uint32_t>(i / m), static_cast<std::uint32_t>(i % m), h[2](0)};
  }
  std::array<std::uint32_t, 3> y_coords(std::size_t i) const {
    return {static_cast<std::uint32_t>(i / m), h[1](0), static_cast<std::uint32_t>(i % m)};
  }
  std::array<std::uint32_t, 3> z_coords(std::size_t i) const {
    return {h[0](0), static_cast<std::uint32_t>(i / m), static_cast<std::uint32_t>(i % m)};
  }

  /// Does the edge from coordinates u to v satisfy the three constraints for label a?
  bool admits(const std::array<std::uint32_t, 3>& u, const std::array<std::uint32_t, 3>& v, std::int64_t a) const {
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t off = static_cast<std::uint32_t>(
          (std::uint64_t{v[i]} + 2ULL * m - u[i] - h[i](a) + h[i](0)) % m);
      if (!std::binary_search(phi.begin(), phi.end(), off)) return false;
    }
    return true;
  }
};

inline LabeledTripartiteGraph build_3sum_graph(const ThreeSumInstance& inst, const LinearHashFn& h1,
                                               const LinearHashFn& h2, const LinearHashFn& h3,
                                               std::vector<std::uint32_t> phi) {
  if (h1.bucket_bits != h2.bucket_bits || h2.bucket_bits != h3.bucket_bits) {
    throw std::invalid_argument("build_3sum_graph: hash ranges differ");
  }
  LabeledTripartiteGraph lg;
  lg.m = static_cast<std::uint32_t>(h1.buckets());
  lg.h = {h1, h2, h3};
  std::sort(phi.begin(), phi.end());
  lg.phi = std::move(phi);
  const std::uint32_t m = lg.m;
  const std::size_t side = std::size_t{m} * m;
  lg.graph = TripartiteGraph(BoolMatrix(side, side), BoolMatrix(side, side), BoolMatrix(side, side));

  std::vector<std::int64_t> vals = inst.values;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  auto add = [&](int part, BoolMatrix& mat, std::size_t r, std::size_t c, std::int64_t label) {
    mat.set(r, c);
    auto& l = lg.labels[part][static_cast<std::uint64_t>(r) * mat.cols() + c];
    if (l.empty() || l.back() != label) l.push_back(label);
  };
  auto shifted = [&](std::uint32_t base, std::uint32_t d) { return static_cast<std::uint32_t>((base + d) % m); };
  // v_i must lie in u_i + h_i(a) - h_i(0) + phi.
  auto delta = [&](int i, std::int64_t a) { return static_cast<std::uint32_t>((lg.h[i](a) + m - lg.h[i](0)) % m); };

  for (std::int64_t a : vals) {
    std::array<std::uint32_t, 3> dl{delta(0, a), delta(1, a), delta(2, a)};
    // A: x -> y. y2 = h2(0) fixed, x3 = h3(0) fixed.
    for (std::uint32_t x1 = 0; x1 < m; ++x1) {
      for (std::uint32_t x2 = 0; x2 < m; ++x2) {
        const auto xc = lg.x_coords(lg.x_index(x1, x2));
        std::set<std::size_t> ys;
        for (auto p1 : lg.phi) {
          for (auto p3 : lg.phi) {
            const std::array<std::uint32_t, 3> yc{shifted(x1, dl[0] + p1), h2(0), shifted(xc[2], dl[2] + p3)};
            if (lg.admits(xc, yc, a)) ys.insert(lg.y_index(yc[0], yc[2]));
          }
        }
        for (auto y : ys) add(0, lg.graph.a, lg.x_index(x1, x2), y, a);
      }
    }
    // B: y -> z. z1 = h1(0) fixed.
    for (std::uint32_t y1 = 0; y1 < m; ++y1) {
      for (std::uint32_t y3 = 0; y3 < m; ++y3) {
        const auto yc = lg.y_coords(lg.y_index(y1, y3));
        std::set<std::size_t> zs;
        for (auto p2 : lg.phi) {
          for (auto p3 : lg.phi) {
            const std::array<std::uint32_t, 3> zc{h1(0), shifted(yc[1], dl[1] + p2), shifted(y3, dl[2] + p3)};
            if (lg.admits(yc, zc, a)) zs.insert(lg.z_index(zc[1], zc[2]));
          }
        }
        for (auto z : zs) add(1, lg.graph.b, lg.y_index(y1, y3), z, a);
      }
    }
    // C: z -> x, stored as C(x, z).
    for (std::uint32_t z2 = 0; z2 < m; ++z2) {
      for (std::uint32_t z3 = 0; z3 < m; ++z3) {
        const auto zc = lg.z_coords(lg.z_index(z2, z3));
        std::set<std::size_t> xs;
        for (auto p1 : lg.phi) {
          for (auto p2 : lg.phi) {
            const std::array<std::uint32_t, 3> xc{shifted(zc[0], dl[0] + p1), shifted(z2, dl[1] + p2), h3(0)};
            if (lg.admits(zc, xc, a)) xs.insert(lg.x_index(xc[0], xc[1]));
          }
        }
        for (auto x : xs) add(2, lg.graph.c, x, lg.z_index(z2, z3), a);
      }
    }
  }
  return lg;
}

/// The triple the correctness argument builds for a + b + c = 0.
inline Triangle planted_witness(const LabeledTripartiteGraph& lg, std::int64_t a, std::int64_t b, std::int64_t c) {
  const auto& h = lg.h;
  return {static_cast<Index>(lg.x_index(h[0](c), h[1](-a))), static_cast<Index>(lg.y_index(h[0](-b), h[2](a))),
          static_cast<Index>(lg.z_index(h[1](b), h[2](-c)))};
}

// ---------------------------------------------------------------------------
// Solver

struct ThreeSumConfig {
  unsigned bucket_bits = 0;  // 0: ceil(log2(n) / 3) + 1
  std::uint64_t seed = 1;
  double phase1_constant = 1.0;
  std::size_t calibration_pairs = 4096;
};

struct ThreeSumStats {
  bool phase1_hit = false;
  std::size_t sampled_pairs = 0;
  std::uint32_t m = 0;
  std::size_t edges = 0;
  std::size_t triangles = 0;
  std::vector<std::uint32_t> measured_phi;
};

inline unsigned default_bucket_bits(std::size_t n) {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 1)));
  return static_cast<unsigned>(std::ceil(lg / 3.0)) + 1;
}

inline ThreeSumAnswer solve_3sum_via_triangles(const ThreeSumInstance& inst, const ThreeSumConfig& cfg = {},
                                               ThreeSumStats* stats = nullptr) {
  inst.validate();
  ThreeSumStats local;
  const auto finish = [&](ThreeSumAnswer ans) {
    if (stats != nullptr) *stats = local;
    return ans;
  };
  if (inst.values.empty()) return finish(std::nullopt);
  const std::size_t n = inst.values.size();
  const std::unordered_set<std::int64_t> members(inst.values.begin(), inst.values.end());
  Rng rng(cfg.seed);

  // Phase 1: random pairs.
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  local.sampled_pairs = static_cast<std::size_t>(std::ceil(cfg.phase1_constant * static_cast<double>(n) * lg));
  for (std::size_t i = 0; i < local.sampled_pairs; ++i) {
    const std::int64_t a = inst.values[rng.below(n)];
    const std::int64_t b = inst.values[rng.below(n)];
    if (members.contains(-a - b)) {
      local.phase1_hit = true;
      return finish(ThreeSumWitness{a, b, -a - b});
    }
  }

  // Phase 2: hashed graph and triangle listing.
  const unsigned bb = cfg.bucket_bits == 0 ? default_bucket_bits(n) : cfg.bucket_bits;
  const LinearHashFn h1 = sample_linear_hash(bb, rng.next(), inst.bound);
  const LinearHashFn h2 = sample_linear_hash(bb, rng.next(), inst.bound);
  const LinearHashFn h3 = sample_linear_hash(bb, rng.next(), inst.bound);
  const auto phi = analytic_phi(bb);
  for (const auto& h : {h1, h2, h3}) {
    for (auto off : measure_phi(h, inst.bound, cfg.calibration_pairs, rng.next())) {
      if (!std::binary_search(phi.begin(), phi.end(), off)) {
        throw std::logic_error("3-SUM: hash offset outside the almost-linearity set");
      }
      local.measured_phi.push_back(off);
    }
  }
  std::sort(local.measured_phi.begin(), local.measured_phi.end());
  local.measured_phi.erase(std::unique(local.measured_phi.begin(), local.measured_phi.end()), local.measured_phi.end());

  const LabeledTripartiteGraph lgph = build_3sum_graph(inst, h1, h2, h3, phi);
  local.m = lgph.m;
  local.edges = lgph.graph.a.count_ones() + lgph.graph.b.count_ones() + lgph.graph.c.count_ones();
  const TripartiteGraph& g = lgph.graph;
  const auto triangles = four_russians_list(g, FourRussiansParams::defaults_for(g));
  local.triangles = triangles.size();
  for (const auto& t : triangles) {
    const auto* la = lgph.labels_of(0, t.x, t.y);
    const auto* lb = lgph.labels_of(1, t.y, t.z);
    const auto* lc = lgph.labels_of(2, t.x, t.z);
    if (la == nullptr || lb == nullptr || lc == nullptr) throw std::logic_error("3-SUM: unlabeled edge");
    for (auto a : *la) {
      for (auto b : *lb) {
        if (std::binary_search(lc->begin(), lc->end(), -a - b)) return finish(ThreeSumWitness{a, b, -a - b});
      }
    }
  }
  return finish(std::nullopt);
}

// ---------------------------------------------------------------------------
// Generators

inline ThreeSumInstance random_3sum(std::size_t n, std::int64_t bound, Rng& rng) {
  ThreeSumInstance inst{{}, bound};
  const auto width = static_cast<std::uint64_t>(bound) * 2 + 1;
  for (std::size_t i = 0; i < n; ++i) inst.values.push_back(static_cast<std::int64_t>(rng.below(width)) - bound);
  return inst;
}

/// Random instance with one solution a + b + c = 0 planted at random positions.
inline ThreeSumInstance planted_3sum(std::size_t n, std::int64_t bound, Rng& rng) {
  if (n < 3) throw std::invalid_argument("planted 3-SUM needs n >= 3");
  ThreeSumInstance inst = random_3sum(n, bound, rng);
  const auto half = static_cast<std::uint64_t>(bound / 2);
  const auto a = static_cast<std::int64_t>(rng.below(2 * half + 1)) - static_cast<std::int64_t>(half);
  const auto b = static_cast<std::int64_t>(rng.below(2 * half + 1)) - static_cast<std::int64_t>(half);
  std::array<std::size_t, 3> pos{};
  for (std::size_t i = 0; i < 3; ++i) {
    do {
      pos[i] = rng.below(n);
    } while (std::find(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(i), pos[i]) != pos.begin() + static_cast<std::ptrdiff_t>(i));
  }
  inst.values[pos[0]] = a;
  inst.values[pos[1]] = b;
  inst.values[pos[2]] = -a - b;
  return inst;
}

}  // namespace regbmm
