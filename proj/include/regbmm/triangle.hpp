#pragma once

// Triangles in tripartite graphs: brute force, exact counting, detection
// through the AB-decomposition, BMM by witness elimination, Four-Russians
// listing and the recursive listing algorithm.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitmatrix.hpp"
#include "decompose.hpp"
#include "rational.hpp"

namespace regbmm {

struct Triangle {
  Index x = 0;
  Index y = 0;
  Index z = 0;
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// Sink returning false to stop the search.
using TriangleSink = std::function<bool(Index, Index, Index)>;

// ---------------------------------------------------------------------------
// Oracles

inline std::vector<Triangle> brute_force_triangles(const TripartiteGraph& g) {
  g.validate();
  const BoolMatrix bt = transpose(g.b);
  std::vector<Triangle> out;
  for (std::size_t x = 0; x < g.nx(); ++x) {
    auto ax = g.a.row(x);
    for (Index z : g.c.row_indices(x)) {
      auto bz = bt.row(z);
      for (std::size_t wi = 0; wi < ax.size(); ++wi) {
        Word w = ax[wi] & bz[wi];
        while (w != 0) {
          const auto y = static_cast<Index>(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
          out.push_back({static_cast<Index>(x), y, z});
          w &= w - 1;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t count_triangles_exact(const TripartiteGraph& g) {
  g.validate();
  const BoolMatrix bt = transpose(g.b);
  std::uint64_t total = 0;
  for (std::size_t x = 0; x < g.nx(); ++x) {
    for (Index z : g.c.row_indices(x)) total += and_count(g.a.row(x), bt.row(z));
  }
  return total;
}

/// Scalar triple loop over (x, z, y) with early exit; the performance baseline.
inline bool naive_detect(const TripartiteGraph& g) {
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  const std::size_t nz = g.nz();
  std::vector<std::uint8_t> a(nx * ny);
  std::vector<std::uint8_t> bt(nz * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) a[x * ny + y] = g.a.get(x, y) ? 1 : 0;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t z = 0; z < nz; ++z) bt[z * ny + y] = g.b.get(y, z) ? 1 : 0;
  }
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (!g.c.get(x, z)) continue;
      const std::uint8_t* ar = a.data() + x * ny;
      const std::uint8_t* br = bt.data() + z * ny;
      std::uint8_t hit = 0;
      for (std::size_t y = 0; y < ny; ++y) hit |= static_cast<std::uint8_t>(ar[y] & br[y]);
      if (hit != 0) return true;
    }
  }
  return false;
}

/// Scalar triple loop counting every triangle.
inline std::uint64_t naive_count(const TripartiteGraph& g) {
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  const std::size_t nz = g.nz();
  std::vector<std::uint8_t> a(nx * ny);
  std::vector<std::uint8_t> bt(nz * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) a[x * ny + y] = g.a.get(x, y) ? 1 : 0;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t z = 0; z < nz; ++z) bt[z * ny + y] = g.b.get(y, z) ? 1 : 0;
  }
  std::uint64_t total = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (!g.c.get(x, z)) continue;
      for (std::size_t y = 0; y < ny; ++y) total += a[x * ny + y] & bt[z * ny + y];
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Sparsity-aware search: iterate the 1-entries of the sparsest edge part.

inline bool search_sparse(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix& c, const TriangleSink& sink) {
  const std::uint64_t na = a.count_ones();
  const std::uint64_t nb = b.count_ones();
  const std::uint64_t nc = c.count_ones();
  if (na == 0 || nb == 0 || nc == 0) return true;
  auto emit_bits = [&](std::span<const Word> l, std::span<const Word> r, auto&& on_index) {
    for (std::size_t wi = 0; wi < l.size(); ++wi) {
      Word w = l[wi] & r[wi];
      while (w != 0) {
        if (!on_index(static_cast<Index>(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w))))) {
          return false;
        }
        w &= w - 1;
      }
    }
    return true;
  };
  if (nc <= na && nc <= nb) {
    const BoolMatrix bt = transpose(b);
    for (std::size_t x = 0; x < c.rows(); ++x) {
      for (Index z : c.row_indices(x)) {
        if (!emit_bits(a.row(x), bt.row(z), [&](Index y) { return sink(static_cast<Index>(x), y, z); })) return false;
      }
    }
  } else if (na <= nb) {
    for (std::size_t x = 0; x < a.rows(); ++x) {
      for (Index y : a.row_indices(x)) {
        if (!emit_bits(b.row(y), c.row(x), [&](Index z) { return sink(static_cast<Index>(x), y, z); })) return false;
      }
    }
  } else {
    const BoolMatrix at = transpose(a);
    const BoolMatrix ct = transpose(c);
    for (std::size_t y = 0; y < b.rows(); ++y) {
      for (Index z : b.row_indices(y)) {
        if (!emit_bits(at.row(y), ct.row(z), [&](Index x) { return sink(x, static_cast<Index>(y), z); })) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Detection

struct DetectResult {
  bool found = false;
  std::optional<Triangle> witness;
  std::size_t pieces = 0;
  std::size_t sparse_pieces = 0;
  std::size_t dense_pieces = 0;
  bool certified_by_uniformity = false;
};

/// The dense-piece shortcut needs eps < 1/80 and d >= 2/eps.
inline bool uniformity_premise(const Rational& epsilon, unsigned d) {
  return epsilon < Rational(1, 80) && epsilon * d >= 2;
}

/// Searches the decomposition pieces of (A, B) against C, all in global coordinates.
inline DetectResult detect_in_pieces(const std::vector<ABDecompPiece>& pieces, const BoolMatrix& c,
                                     const Rational& epsilon, unsigned d, bool witness) {
  DetectResult res;
  res.pieces = pieces.size();
  const Rational c_exp = epsilon * d / 2;
  const bool premise = uniformity_premise(epsilon, d);
  for (const auto& p : pieces) {
    const BoolMatrix ck = unlabeled(submatrix(c, p.xs, p.zs));
    const bool sparse = p.cert == ABCert::Small || sparse_at(p.a_part, d) || sparse_at(p.b_part, d) ||
                        leq_pow2_neg(density(ck), c_exp);
    if (!sparse) {
      ++res.dense_pieces;
      if (premise && !witness && p.cert == ABCert::RegularPair) {
        res.found = true;
        res.certified_by_uniformity = true;
        return res;
      }
    } else {
      ++res.sparse_pieces;
    }
    std::optional<Triangle> hit;
    search_sparse(p.a_part, p.b_part, ck, [&](Index x, Index y, Index z) {
      hit = Triangle{p.xs[x], p.ys[y], p.zs[z]};
      return false;
    });
    if (hit) {
      res.found = true;
      res.witness = hit;
      return res;
    }
  }
  return res;
}

inline DetectResult detect_triangle(const TripartiteGraph& g, const Rational& epsilon, unsigned d, bool witness,
                                    const DecompConfig& cfg = {}) {
  g.validate();
  if (g.a.empty() || g.b.empty() || g.c.empty()) return {};
  const auto pieces = ab_decomposition(g.a, g.b, epsilon, d, cfg);
  return detect_in_pieces(pieces, g.c, epsilon, d, witness);
}

// ---------------------------------------------------------------------------
// BMM through detection

struct BmmStats {
  std::size_t detections = 0;
  std::size_t decompositions = 0;
};

inline std::size_t default_block(std::size_t n) {
  std::size_t b = 1;
  while (b * b * b < n) ++b;
  return b;
}

/// Boolean product by repeated witness detection on block triples.
inline BoolMatrix bmm_via_triangle(const BoolMatrix& a, const BoolMatrix& b, const Rational& epsilon, unsigned d,
                                   std::size_t block = 0, const DecompConfig& cfg = {}, BmmStats* stats = nullptr) {
  if (a.cols() != b.rows()) throw DimensionError("bmm_via_triangle: inner dimensions differ");
  BoolMatrix out(a.rows(), b.cols());
  if (a.empty() || b.empty()) return out;
  if (block == 0) block = default_block(std::max({a.rows(), a.cols(), b.cols()}));
  auto blocks = [&](std::size_t n) {
    std::vector<IndexSet> v;
    for (std::size_t lo = 0; lo < n; lo += block) {
      std::vector<Index> m;
      for (std::size_t i = lo; i < std::min(n, lo + block); ++i) m.push_back(static_cast<Index>(i));
      v.emplace_back(std::move(m));
    }
    return v;
  };
  const auto xb = blocks(a.rows());
  const auto yb = blocks(a.cols());
  const auto zb = blocks(b.cols());
  BmmStats local;
  for (const auto& xs : xb) {
    for (const auto& zs : zb) {
      BoolMatrix residual = BoolMatrix::ones(xs.size(), zs.size());
      for (const auto& ys : yb) {
        const BoolMatrix ab = unlabeled(submatrix(a, xs, ys));
        const BoolMatrix bb = unlabeled(submatrix(b, ys, zs));
        const auto pieces = ab_decomposition(ab, bb, epsilon, d, cfg);
        ++local.decompositions;
        for (;;) {
          ++local.detections;
          const DetectResult r = detect_in_pieces(pieces, residual, epsilon, d, true);
          if (!r.found) break;
          if (!r.witness) throw std::logic_error("bmm_via_triangle: detection without witness");
          out.set(xs[r.witness->x], zs[r.witness->z]);
          residual.set(r.witness->x, r.witness->z, false);
        }
      }
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

// ---------------------------------------------------------------------------
// Four-Russians listing

struct FourRussiansParams {
  std::size_t s = 64;
  std::size_t r = 8;

  void validate() const {
    if (r < 1 || s < r) throw std::invalid_argument("Four-Russians needs s >= r >= 1");
    if (s > kWordBits) throw std::invalid_argument("Four-Russians group size is limited to 64");
  }

  static FourRussiansParams defaults_for(const TripartiteGraph& g) {
    const std::size_t part = std::max({g.nx(), g.ny(), g.nz(), std::size_t{1}});
    FourRussiansParams p;
    p.s = std::min<std::size_t>(64, part);
    p.r = std::min<std::size_t>(8, p.s);
    return p;
  }
};

/// Bits [lo, lo + len) of a packed row, len <= 64.
inline Word bit_window(std::span<const Word> row, std::size_t lo, std::size_t len) {
  if (len == 0) return 0;
  const std::size_t wi = lo / kWordBits;
  const std::size_t off = lo % kWordBits;
  Word v = wi < row.size() ? row[wi] >> off : 0;
  if (off != 0 && wi + 1 < row.size()) v |= row[wi + 1] << (kWordBits - off);
  return len == kWordBits ? v : v & ((Word{1} << len) - 1);
}

/// Splits a mask into consecutive chunks of at most r set bits.
inline void chunk_mask(Word mask, std::size_t r, std::vector<Word>& out) {
  out.clear();
  while (mask != 0) {
    Word chunk = 0;
    for (std::size_t i = 0; i < r && mask != 0; ++i) {
      const Word low = mask & (~mask + 1);
      chunk |= low;
      mask ^= low;
    }
    out.push_back(chunk);
  }
}

class FourRussians {
 public:
  FourRussians(const TripartiteGraph& g, FourRussiansParams params) : g_(g), p_(params) {
    p_.validate();
    g_.validate();
    at_ = transpose(g_.a);
    groups_x_ = (g_.nx() + p_.s - 1) / p_.s;
    groups_z_ = (g_.nz() + p_.s - 1) / p_.s;
  }

  /// Visits every triangle; stops early when the sink returns false.
  bool run(const TriangleSink& sink) {
    std::vector<Word> s_chunks;
    std::vector<Word> t_chunks;
    std::vector<Word> t_masks(groups_z_);
    for (std::size_t y = 0; y < g_.ny(); ++y) {
      bool any_t = false;
      for (std::size_t j = 0; j < groups_z_; ++j) {
        t_masks[j] = bit_window(g_.b.row(y), j * p_.s, group_len(g_.nz(), j));
        any_t = any_t || t_masks[j] != 0;
      }
      if (!any_t) continue;
      for (std::size_t i = 0; i < groups_x_; ++i) {
        const Word smask = bit_window(at_.row(y), i * p_.s, group_len(g_.nx(), i));
        if (smask == 0) continue;
        chunk_mask(smask, p_.r, s_chunks);
        for (std::size_t j = 0; j < groups_z_; ++j) {
          if (t_masks[j] == 0) continue;
          chunk_mask(t_masks[j], p_.r, t_chunks);
          for (Word sm : s_chunks) {
            for (Word tm : t_chunks) {
              for (std::uint16_t packed : table(i, j, sm, tm)) {
                const auto x = static_cast<Index>(i * p_.s + (packed >> 8));
                const auto z = static_cast<Index>(j * p_.s + (packed & 0xff));
                if (!sink(x, static_cast<Index>(y), z)) return false;
              }
            }
          }
        }
      }
    }
    return true;
  }

  std::size_t table_entries() const { return tables_.size(); }

 private:
  struct Key {
    std::uint32_t i;
    std::uint32_t j;
    Word s;
    Word t;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = (static_cast<std::uint64_t>(k.i) << 32) ^ k.j;
      h ^= k.s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= k.t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  std::size_t group_len(std::size_t n, std::size_t g) const { return std::min(p_.s, n - g * p_.s); }

  /// Edges of C[S, T] as packed (dx << 8 | dz) offsets, built on first use.
  const std::vector<std::uint16_t>& table(std::size_t i, std::size_t j, Word s, Word t) {
    const Key key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), s, t};
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    std::vector<std::uint16_t> edges;
    for (Word sm = s; sm != 0; sm &= sm - 1) {
      const auto dx = static_cast<std::size_t>(std::countr_zero(sm));
      Word hits = bit_window(g_.c.row(i * p_.s + dx), j * p_.s, group_len(g_.nz(), j)) & t;
      for (; hits != 0; hits &= hits - 1) {
        edges.push_back(static_cast<std::uint16_t>((dx << 8) | static_cast<std::size_t>(std::countr_zero(hits))));
      }
    }
    return tables_.emplace(key, std::move(edges)).first->second;
  }

  const TripartiteGraph& g_;
  FourRussiansParams p_;
  BoolMatrix at_;
  std::size_t groups_x_ = 0;
  std::size_t groups_z_ = 0;
  std::unordered_map<Key, std::vector<std::uint16_t>, KeyHash> tables_;
};

inline std::vector<Triangle> four_russians_list(const TripartiteGraph& g, const FourRussiansParams& params) {
  std::vector<Triangle> out;
  if (g.nx() == 0 || g.ny() == 0 || g.nz() == 0) return out;
  FourRussians fr(g, params);
  fr.run([&](Index x, Index y, Index z) {
    out.push_back({x, y, z});
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline bool four_russians_detect(const TripartiteGraph& g, const FourRussiansParams& params) {
  if (g.nx() == 0 || g.ny() == 0 || g.nz() == 0) return false;
  FourRussians fr(g, params);
  return !fr.run([](Index, Index, Index) { return false; });
}

inline std::uint64_t four_russians_count(const TripartiteGraph& g, const FourRussiansParams& params) {
  if (g.nx() == 0 || g.ny() == 0 || g.nz() == 0) return 0;
  std::uint64_t n = 0;
  FourRussians fr(g, params);
  fr.run([&](Index, Index, Index) {
    ++n;
    return true;
  });
  return n;
}

// ---------------------------------------------------------------------------
// Recursive listing

struct ListingParams {
  Rational epsilon = Rational(1, 160);
  unsigned d = 3;
  unsigned H = 2;
  Rational gamma = Rational(1, 200);
  Rational delta = Rational(1, 2);
  std::optional<FourRussiansParams> four_russians;

  void validate() const {
    if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("listing: epsilon must lie in (0,1)");
    if (d < 1) throw std::invalid_argument("listing: d >= 1");
    if (gamma <= 0 || delta <= 0) throw std::invalid_argument("listing: gamma and delta must be positive");
  }

  unsigned buckets() const {
    const Rational half = epsilon * d / 2;
    BigInt l = numerator_of(half) / denominator_of(half);
    if (l * denominator_of(half) < numerator_of(half)) l += 1;
    return std::max(1U, l.convert_to<unsigned>());
  }

  /// Desk defaults: eps = 1/160, d = 3, H = 2, gamma and delta from the
  /// running-time formulas with log n replaced by max(2, log2 n).
  static ListingParams desk(std::size_t n) {
    ListingParams p;
    const double logn = std::max(2.0, std::log2(static_cast<double>(std::max<std::size_t>(n, 2))));
    const double loglog = std::log2(logn);
    const unsigned L = p.buckets();
    p.gamma = Rational(1, 8 * L * (p.d + 2) * (p.d + 2));
    p.delta = Rational(loglog * loglog / (to_double(p.gamma) * logn * logn));
    return p;
  }

  /// Small-d parameters under which every case of the listing recursion is reachable.
  static ListingParams coverage() {
    ListingParams p;
    p.epsilon = Rational(1, 2);
    p.d = 12;
    p.H = 2;
    p.gamma = Rational(1, 2);
    p.delta = Rational(1, 2);
    return p;
  }
};

struct ListingStats {
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  std::size_t case3 = 0;
  std::size_t case31 = 0;
  std::size_t case32 = 0;
  std::size_t case33 = 0;
  std::size_t case4 = 0;
  std::size_t brute_force = 0;
  std::size_t pieces = 0;
};

namespace detail {

/// Local-to-global id tables; when `swapped` the local parts are (Z, Y, X).
struct PartMap {
  std::vector<Index> p0;
  std::vector<Index> p1;
  std::vector<Index> p2;
  bool swapped = false;

  Triangle global(Index a, Index b, Index c) const {
    return swapped ? Triangle{p2[c], p1[b], p0[a]} : Triangle{p0[a], p1[b], p2[c]};
  }
  PartMap restrict(const IndexSet& s0, const IndexSet& s1, const IndexSet& s2) const {
    PartMap m;
    m.swapped = swapped;
    for (Index i : s0) m.p0.push_back(p0[i]);
    for (Index i : s1) m.p1.push_back(p1[i]);
    for (Index i : s2) m.p2.push_back(p2[i]);
    return m;
  }
  PartMap mirrored() const { return {p2, p1, p0, !swapped}; }
};

inline PartMap identity_map(std::size_t nx, std::size_t ny, std::size_t nz) {
  auto range = [](std::size_t n) { return IndexSet::range(n).members(); };
  return {range(nx), range(ny), range(nz), false};
}

class Lister {
 public:
  Lister(const ListingParams& p, std::vector<Triangle>& out, ListingStats& stats) : p_(p), out_(out), stats_(stats) {}

  void list(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix& c, const PartMap& map, unsigned depth) {
    if (a.rows() == 0 || a.cols() == 0 || b.cols() == 0) return;
    if (depth >= p_.H) {
      ++stats_.brute_force;
      sparse(a, b, c, map);
      return;
    }
    const auto pieces = ab_decomposition(a, b, p_.epsilon, p_.d);
    stats_.pieces += pieces.size();
    const Rational quarter = p_.epsilon * p_.d / 4;
    for (const auto& pc : pieces) {
      const BoolMatrix ak = unlabeled(pc.a_part);
      const BoolMatrix bk = unlabeled(pc.b_part);
      const BoolMatrix ck = unlabeled(submatrix(c, pc.xs, pc.zs));
      const PartMap mk = map.restrict(pc.xs, pc.ys, pc.zs);
      const Rational ea = density(ak);
      const Rational eb = density(bk);
      if (leq_pow2_neg(ea, quarter) || leq_pow2_neg(eb, quarter)) {
        ++stats_.case1;
        sparse(ak, bk, ck, mk);
      } else if (ea <= p_.delta && eb <= p_.delta) {
        ++stats_.case2;
        russians(ak, bk, ck, mk);
      } else if (eb >= p_.delta) {
        ++stats_.case3;
        buckets(ak, bk, ck, mk, depth);
      } else {
        ++stats_.case4;
        buckets(transpose(bk), transpose(ak), transpose(ck), mk.mirrored(), depth);
      }
    }
  }

 private:
  void sparse(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix& c, const PartMap& map) {
    search_sparse(a, b, c, [&](Index x, Index y, Index z) {
      out_.push_back(map.global(x, y, z));
      return true;
    });
  }

  FourRussiansParams fr_params(const TripartiteGraph& g) const {
    return p_.four_russians.value_or(FourRussiansParams::defaults_for(g));
  }

  void russians(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix& c, const PartMap& map) {
    const TripartiteGraph g(a, b, c);
    FourRussians fr(g, fr_params(g));
    fr.run([&](Index x, Index y, Index z) {
      out_.push_back(map.global(x, y, z));
      return true;
    });
  }

  /// Splits X by C-degree and handles each bucket.
  void buckets(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix& c, const PartMap& map, unsigned depth) {
    const unsigned L = p_.buckets();
    const std::size_t nx = a.rows();
    const std::size_t nz = c.cols();
    std::vector<std::vector<Index>> members(L + 1);
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t cnt = c.row_count(x);
      // bucket l < L: 2^-l < cnt/nz <= 2^-(l-1); bucket L: cnt/nz <= 2^-(L-1)
      unsigned l = 1;
      while (l < L && !(BigInt(cnt) << l > BigInt(nz))) ++l;
      members[l].push_back(static_cast<Index>(x));
    }
    const IndexSet all_y = IndexSet::range(a.cols());
    const IndexSet all_z = IndexSet::range(nz);
    for (unsigned l = 1; l <= L; ++l) {
      if (members[l].empty()) continue;
      const IndexSet xl(members[l]);
      std::uint64_t ones = 0;
      for (Index x : xl) ones += c.row_count(x);
      const Rational ecl(BigInt(ones), BigInt(nx) * nz);
      const BoolMatrix al = unlabeled(row_submatrix(a, xl));
      const BoolMatrix cl = unlabeled(row_submatrix(c, xl));
      const PartMap ml = map.restrict(xl, all_y, all_z);
      if (leq_pow2_neg(ecl, L - 1)) {
        ++stats_.case31;
        sparse(al, b, cl, ml);
      } else if (Rational(BigInt(xl.size())) < p_.gamma * nx) {
        ++stats_.case32;
        list(al, b, cl, ml, depth + 1);
      } else {
        ++stats_.case33;
        if (ecl < p_.gamma / Rational(ipow(BigInt(2), l))) {
          throw std::logic_error("listing: bucket density below gamma 2^-l");
        }
        // (Y, X, Z, A^T, C_l, B): triangles (y, x, z) correspond to (x, y, z).
        BoolMatrix c_full(nx, nz);
        for (Index x : xl) {
          auto src = c.row(x);
          std::copy(src.begin(), src.end(), c_full.row(x).begin());
        }
        const TripartiteGraph g(transpose(a), c_full, b);
        FourRussians fr(g, fr_params(g));
        fr.run([&](Index y, Index x, Index z) {
          out_.push_back(map.global(x, y, z));
          return true;
        });
      }
    }
  }

  const ListingParams& p_;
  std::vector<Triangle>& out_;
  ListingStats& stats_;
};

}  // namespace detail

inline std::vector<Triangle> list_triangles(const TripartiteGraph& g, const ListingParams& params,
                                            ListingStats* stats = nullptr) {
  g.validate();
  params.validate();
  std::vector<Triangle> out;
  ListingStats local;
  detail::Lister lister(params, out, local);
  lister.list(unlabeled(g.a), unlabeled(g.b), unlabeled(g.c), detail::identity_map(g.nx(), g.ny(), g.nz()), 0);
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw std::logic_error("listing: duplicate triangle");
  if (stats != nullptr) *stats = local;
  return out;
}

}  // namespace regbmm
