#pragma once

// Density-increment machinery: min-degree trimming, good rectangles, the
// A-decomposition, good cubes and the AB-decomposition, with verifiers and a
// text dump format.
//
// Every routine works in the positions of the matrices it is given. Pieces
// therefore name rows and columns of the caller's input; labels carried by
// the input are composed into the piece matrices.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitmatrix.hpp"
#include "gridnorm.hpp"
#include "io.hpp"
#include "rational.hpp"
#include "sift.hpp"

namespace regbmm {

// ---------------------------------------------------------------------------
// MinDegree

enum class MinDegreeCase { MinDegreeOk, DensityIncrement };

struct MinDegreeOutcome {
  IndexSet kept_rows;
  MinDegreeCase which = MinDegreeCase::MinDegreeOk;
};

/// Removes rows in ascending degree order while some row has degree below
/// (1 - eps) times the current density; stops early once at most (1 - gamma)|X|
/// rows remain.
inline MinDegreeOutcome min_degree(const BoolMatrix& a, const Rational& epsilon, const Rational& gamma) {
  if (a.empty()) throw EmptyMatrixError("min_degree on an empty matrix");
  if (epsilon <= 0 || gamma <= 0) throw std::invalid_argument("min_degree: epsilon and gamma must be positive");
  const std::size_t nx = a.rows();
  std::vector<std::size_t> counts = row_counts(a);
  std::vector<Index> order(nx);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return counts[l] < counts[r]; });

  const BigInt en = numerator_of(epsilon);
  const BigInt ed = denominator_of(epsilon);
  const BigInt gn = numerator_of(gamma);
  const BigInt gd = denominator_of(gamma);
  BigInt edges = a.count_ones();
  std::size_t kept = nx;
  std::vector<bool> removed(nx, false);
  MinDegreeCase which = MinDegreeCase::MinDegreeOk;
  for (Index x : order) {
    // count/|Y| < (1-eps) edges/(kept |Y|)  <=>  count * kept * ed < (ed - en) * edges
    if (!(BigInt(counts[x]) * kept * ed < (ed - en) * edges)) break;
    removed[x] = true;
    --kept;
    edges -= counts[x];
    if (BigInt(kept) * gd <= (gd - gn) * nx) {
      which = MinDegreeCase::DensityIncrement;
      break;
    }
  }
  std::vector<Index> rows;
  rows.reserve(kept);
  for (std::size_t x = 0; x < nx; ++x) {
    if (!removed[x]) rows.push_back(static_cast<Index>(x));
  }
  return {IndexSet(std::move(rows)), which};
}

// ---------------------------------------------------------------------------
// Shared helpers

struct DecompConfig {
  SiftBackend backend;
  /// Re-check regularity certificates exactly at production time.
  bool verify_regularity = true;
  double verify_cap = kDefaultCostCap;
};

enum class CertCheck { Pass, Fail, Unchecked };

/// (eps,2,d)-regular and eps-min-degree, checked exactly when affordable.
inline CertCheck check_regular_min_degree(const BoolMatrix& m, const Rational& epsilon, unsigned d, double cap) {
  if (m.empty()) return CertCheck::Fail;
  if (!is_min_degree(m, epsilon)) return CertCheck::Fail;
  try {
    RegularityParams p;
    p.epsilon = epsilon;
    p.k = 2;
    p.ell = d;
    p.d = d;
    return is_regular(m, p, NormMode::Exact, {}, cap) ? CertCheck::Pass : CertCheck::Fail;
  } catch (const InfeasibleError&) {
    return CertCheck::Unchecked;
  }
}

inline bool sparse_at(const BoolMatrix& m, unsigned d) { return m.empty() || leq_pow2_neg(density(m), d); }

inline BoolMatrix unlabeled(BoolMatrix m) {
  m.clear_labels();
  return m;
}

// ---------------------------------------------------------------------------
// RegRect

struct RegRectResult {
  IndexSet rows;
  IndexSet cols;
  std::vector<Rational> density_trace;
  bool regularity_checked = false;
};

/// Good rectangle: A[rows, cols] is (eps,2,d)-regular and eps-min-degree with
/// density at least E[A].
inline RegRectResult reg_rect(const BoolMatrix& a, const Rational& epsilon, unsigned d, const DecompConfig& cfg = {}) {
  if (a.empty()) throw EmptyMatrixError("reg_rect on an empty matrix");
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("reg_rect: epsilon must lie in (0,1)");
  const Rational e0 = density(a);
  if (e0 == 0 || (leq_pow2_neg(e0, d) && e0 * ipow(BigInt(2), d) != 1)) {
    throw std::invalid_argument("reg_rect: density must be at least 2^-d");
  }
  const Rational half(1, 2);
  IndexSet rows = IndexSet::range(a.rows());
  IndexSet cols = IndexSet::range(a.cols());
  BoolMatrix cur = unlabeled(a);
  RegRectResult res;
  res.density_trace.push_back(e0);
  for (;;) {
    const Rational e = density(cur);
    const MinDegreeOutcome md = min_degree(cur, epsilon, half);
    BoolMatrix trimmed = unlabeled(row_submatrix(cur, md.kept_rows));
    const Rational et = density(trimmed);
    if (et >= (1 + epsilon / 2) * e) {
      rows = rows.compose(md.kept_rows);
      cur = std::move(trimmed);
      res.density_trace.push_back(et);
      continue;
    }
    if (md.which == MinDegreeCase::DensityIncrement) throw std::logic_error("min_degree: increment case below bound");
    const SiftOutcome s = sift(trimmed, epsilon, 2, d, cfg.backend);
    if (!s.regular) {
      if (s.achieved_density < (1 + epsilon / 2) * e) throw std::logic_error("reg_rect: density did not increase");
      rows = rows.compose(md.kept_rows).compose(s.rows);
      cols = cols.compose(s.cols);
      cur = unlabeled(submatrix(trimmed, s.rows, s.cols));
      res.density_trace.push_back(s.achieved_density);
      continue;
    }
    res.rows = rows.compose(md.kept_rows);
    res.cols = cols;
    if (!is_min_degree(trimmed, epsilon)) throw std::logic_error("reg_rect: result is not min-degree");
    if (cfg.verify_regularity) {
      const CertCheck c = check_regular_min_degree(trimmed, epsilon, d, cfg.verify_cap);
      if (c == CertCheck::Fail) throw std::logic_error("reg_rect: result is not regular");
      res.regularity_checked = c == CertCheck::Pass;
    }
    return res;
  }
}

// ---------------------------------------------------------------------------
// A-decomposition

enum class ACert { Sparse, RegularMinDeg };

inline const char* to_string(ACert c) { return c == ACert::Sparse ? "Sparse" : "RegularMinDeg"; }

struct ADecompPiece {
  IndexSet rows;
  IndexSet cols;
  BoolMatrix matrix;
  ACert cert = ACert::Sparse;
};

inline std::vector<ADecompPiece> a_decomposition(const BoolMatrix& a, const Rational& epsilon, unsigned d,
                                                 const DecompConfig& cfg = {}) {
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("a_decomposition: epsilon must lie in (0,1)");
  if (d < 1) throw std::invalid_argument("a_decomposition: d >= 1");
  std::vector<ADecompPiece> pieces;
  if (a.empty()) return pieces;
  BoolMatrix residual = a;
  std::uint64_t ones = residual.count_ones();
  BigInt area = 0;
  for (;;) {
    if (leq_pow2_neg(density(residual), d)) {
      // An edge-free residual adds nothing once a piece exists.
      if (ones == 0 && !pieces.empty()) break;
      pieces.push_back({IndexSet::range(a.rows()), IndexSet::range(a.cols()), residual, ACert::Sparse});
      area += BigInt(a.rows()) * a.cols();
      break;
    }
    RegRectResult rect = reg_rect(residual, epsilon, d, cfg);
    BoolMatrix m = submatrix(residual, rect.rows, rect.cols);
    area += BigInt(rect.rows.size()) * rect.cols.size();
    residual = zero_rectangle(residual, rect.rows, rect.cols);
    pieces.push_back({std::move(rect.rows), std::move(rect.cols), std::move(m), ACert::RegularMinDeg});
    const std::uint64_t left = residual.count_ones();
    if (left >= ones) throw std::logic_error("a_decomposition: residual did not shrink");
    ones = left;
  }
  if (area > BigInt(d + 2) * a.rows() * a.cols()) throw std::logic_error("a_decomposition: area bound violated");
  return pieces;
}

// ---------------------------------------------------------------------------
// Verification reports

struct PropertyCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyCheck> checks;
  std::size_t regularity_exact = 0;
  std::size_t regularity_by_construction = 0;
  std::size_t piece_count = 0;
  std::size_t min_piece_area = 0;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
  }

  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }

  void print(std::ostream& out) const {
    for (const auto& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) out << ": " << c.detail;
      out << '\n';
    }
    out << "pieces " << piece_count << ", regularity exact " << regularity_exact << ", by construction "
        << regularity_by_construction << '\n';
  }
};

namespace detail {

/// Marks the 1-entries of `m` at (rows[i], cols[j]) in `cover`; false on overlap
/// or on an entry that is not a 1 of `target`.
inline bool cover_piece(std::vector<std::uint8_t>& cover, const BoolMatrix& target, const IndexSet& rows,
                        const IndexSet& cols, const BoolMatrix& m, std::string& why) {
  if (m.rows() != rows.size() || m.cols() != cols.size()) {
    why = "piece matrix does not match its index sets";
    return false;
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (Index j : m.row_indices(i)) {
      const std::size_t r = rows[i];
      const std::size_t c = cols[j];
      if (!target.get(r, c)) {
        why = "piece entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not an edge";
        return false;
      }
      auto& slot = cover[r * target.cols() + c];
      if (slot != 0) {
        why = "entry (" + std::to_string(r) + "," + std::to_string(c) + ") covered twice";
        return false;
      }
      slot = 1;
    }
  }
  return true;
}

inline bool indices_valid(const IndexSet& s, std::size_t bound) { return s.empty() || s.members().back() < bound; }

}  // namespace detail

inline VerifyReport verify_a_decomposition(const std::vector<ADecompPiece>& pieces, const BoolMatrix& a,
                                           const Rational& epsilon, unsigned d, double cap = kDefaultCostCap) {
  VerifyReport rep;
  rep.piece_count = pieces.size();
  rep.min_piece_area = a.rows() * a.cols();
  std::vector<std::uint8_t> cover(a.rows() * a.cols(), 0);
  bool partition = true;
  std::string why;
  BigInt area = 0;
  std::size_t bad_certs = 0;
  for (const auto& p : pieces) {
    if (!detail::indices_valid(p.rows, a.rows()) || !detail::indices_valid(p.cols, a.cols())) {
      partition = false;
      why = "piece index out of range";
      break;
    }
    if (partition && !detail::cover_piece(cover, a, p.rows, p.cols, p.matrix, why)) partition = false;
    area += BigInt(p.rows.size()) * p.cols.size();
    rep.min_piece_area = std::min(rep.min_piece_area, p.rows.size() * p.cols.size());
    if (p.cert == ACert::Sparse) {
      if (!sparse_at(p.matrix, d)) ++bad_certs;
    } else {
      switch (check_regular_min_degree(p.matrix, epsilon, d, cap)) {
        case CertCheck::Pass: ++rep.regularity_exact; break;
        case CertCheck::Fail: ++bad_certs; break;
        case CertCheck::Unchecked:
          if (!is_min_degree(p.matrix, epsilon)) ++bad_certs;
          ++rep.regularity_by_construction;
          break;
      }
    }
  }
  if (partition) {
    std::uint64_t covered = 0;
    for (auto c : cover) covered += c;
    if (covered != a.count_ones()) {
      partition = false;
      why = "pieces cover " + std::to_string(covered) + " of " + std::to_string(a.count_ones()) + " edges";
    }
  }
  rep.add("property 1 (edge partition)", partition, why);
  rep.add("property 2 (piece certificates)", bad_certs == 0, std::to_string(bad_certs) + " failing pieces");
  const BigInt bound = BigInt(d + 2) * a.rows() * a.cols();
  rep.add("property 3 (area bound)", area <= bound, area.str() + " <= " + bound.str());
  return rep;
}

// ---------------------------------------------------------------------------
// RegCube

struct CubePiece {
  IndexSet xs;
  IndexSet ys;
  IndexSet zs;
  BoolMatrix a_part;
  ACert a_cert = ACert::Sparse;
};

struct GoodCube {
  IndexSet y_star;
  IndexSet z_star;
  std::vector<CubePiece> pieces;
};

inline VerifyReport verify_good_cube(const GoodCube& cube, const BoolMatrix& a, const BoolMatrix& b,
                                     const Rational& epsilon, const Rational& gamma, unsigned d,
                                     double cap = kDefaultCostCap) {
  VerifyReport rep;
  rep.piece_count = cube.pieces.size();
  const BoolMatrix a_star = submatrix(a, IndexSet::range(a.rows()), cube.y_star);
  // Property 1: the A-pieces partition A[X, Y*]. Pieces name Y positions, so
  // translate into positions of Y*.
  std::vector<std::uint8_t> cover(a.rows() * a.cols(), 0);
  bool partition = true;
  std::string why;
  std::uint64_t covered = 0;
  for (const auto& p : cube.pieces) {
    for (Index y : p.ys) {
      if (!cube.y_star.contains(y)) {
        partition = false;
        why = "piece column outside Y*";
      }
    }
    if (partition && !detail::cover_piece(cover, a, p.xs, p.ys, p.a_part, why)) partition = false;
    covered += p.a_part.count_ones();
  }
  if (partition && covered != a_star.count_ones()) {
    partition = false;
    why = "pieces cover " + std::to_string(covered) + " of " + std::to_string(a_star.count_ones()) + " edges";
  }
  rep.add("property 1 (A[X,Y*] edge partition)", partition, why);

  std::size_t bad = 0;
  for (const auto& p : cube.pieces) {
    if (p.a_cert == ACert::Sparse) {
      if (!sparse_at(p.a_part, d)) ++bad;
    } else if (check_regular_min_degree(p.a_part, epsilon, d, cap) == CertCheck::Fail) {
      ++bad;
    }
    for (Index z : p.zs) {
      if (!cube.z_star.contains(z)) ++bad;
    }
    const BoolMatrix bt = transpose(submatrix(b, p.ys, p.zs));
    switch (check_regular_min_degree(bt, epsilon, d, cap)) {
      case CertCheck::Pass: ++rep.regularity_exact; break;
      case CertCheck::Fail: ++bad; break;
      case CertCheck::Unchecked: ++rep.regularity_by_construction; break;
    }
  }
  rep.add("property 2 (piece certificates)", bad == 0, std::to_string(bad) + " failing pieces");

  const BoolMatrix b_star = submatrix(b, cube.y_star, cube.z_star);
  rep.add("property 3 (E[B[Y*,Z*]] >= E[B])", !b_star.empty() && density(b_star) >= density(b));

  const BigInt whole = BigInt(a.rows()) * cube.y_star.size() * cube.z_star.size();
  BigInt vol = 0;
  BigInt outside = 0;
  for (const auto& p : cube.pieces) {
    vol += BigInt(p.xs.size()) * p.ys.size() * p.zs.size();
    outside += BigInt(p.xs.size()) * p.ys.size() * (cube.z_star.size() - p.zs.size());
  }
  rep.add("property 4 (volume bound)", vol <= BigInt(d + 2) * whole, vol.str() + " <= " + (BigInt(d + 2) * whole).str());
  rep.add("property 5 (lost volume bound)", Rational(outside) <= gamma * (d + 2) * Rational(whole), outside.str());
  return rep;
}

/// Good cube for (A, B): Y*, Z* and an A-decomposition of A[X, Y*] whose
/// pieces carry large Z_l subject to B[Y_l, Z_l]^T being regular and min-degree.
inline GoodCube reg_cube(const BoolMatrix& a, const BoolMatrix& b, const Rational& epsilon, const Rational& gamma,
                         unsigned d, const DecompConfig& cfg = {}) {
  if (a.cols() != b.rows()) throw DimensionError("reg_cube: A and B do not share Y");
  if (a.empty() || b.empty()) throw EmptyMatrixError("reg_cube on an empty matrix");
  if (gamma <= 0 || gamma >= Rational(1, 2)) throw std::invalid_argument("reg_cube: gamma must lie in (0, 1/2)");
  const Rational e_b = density(b);
  if (e_b == 0 || (leq_pow2_neg(e_b, d) && e_b * ipow(BigInt(2), d) != 1)) {
    throw std::invalid_argument("reg_cube: E[B] must be at least 2^-d");
  }
  const Rational half(1, 2);
  const IndexSet all_x = IndexSet::range(a.rows());
  IndexSet ys = IndexSet::range(b.rows());
  IndexSet zs = IndexSet::range(b.cols());
  for (;;) {
    const BoolMatrix bc = unlabeled(submatrix(b, ys, zs));
    const Rational e = density(bc);
    const MinDegreeOutcome md = min_degree(bc, epsilon * gamma / 2, half);
    const BoolMatrix bp = unlabeled(row_submatrix(bc, md.kept_rows));
    if (density(bp) >= (1 + epsilon * gamma / 4) * e) {
      ys = ys.compose(md.kept_rows);
      continue;
    }
    const IndexSet y_prime = ys.compose(md.kept_rows);
    const BoolMatrix ap = unlabeled(submatrix(a, all_x, y_prime));
    const std::vector<ADecompPiece> parts = a_decomposition(ap, epsilon, d, cfg);

    bool restarted = false;
    GoodCube cube;
    for (const auto& part : parts) {
      if (part.rows.empty() || part.cols.empty()) continue;
      const BoolMatrix by = unlabeled(row_submatrix(bp, part.cols));  // B[Y_l, Z]
      const MinDegreeOutcome mz = min_degree(transpose(by), epsilon, gamma);
      const BoolMatrix bl = unlabeled(submatrix(by, IndexSet::range(by.rows()), mz.kept_rows));
      if (density(bl) >= (1 + epsilon * gamma) * density(by)) {
        ys = y_prime.compose(part.cols);
        zs = zs.compose(mz.kept_rows);
        restarted = true;
        break;
      }
      const SiftOutcome s = sift(transpose(bl), epsilon, 2, d, cfg.backend);
      if (!s.regular) {
        ys = y_prime.compose(part.cols).compose(s.cols);
        zs = zs.compose(mz.kept_rows).compose(s.rows);
        restarted = true;
        break;
      }
      CubePiece cp;
      cp.xs = part.rows;
      cp.ys = y_prime.compose(part.cols);
      cp.zs = zs.compose(mz.kept_rows);
      cp.a_part = part.matrix;
      cp.a_part.set_labels(cp.xs, cp.ys);
      cp.a_cert = part.cert;
      cube.pieces.push_back(std::move(cp));
    }
    if (restarted) continue;
    cube.y_star = y_prime;
    cube.z_star = zs;
    if (cfg.verify_regularity) {
      const VerifyReport rep = verify_good_cube(cube, a, b, epsilon, gamma, d, cfg.verify_cap);
      if (!rep.ok()) {
        std::ostringstream msg;
        rep.print(msg);
        throw std::logic_error("reg_cube: postconditions failed\n" + msg.str());
      }
    }
    return cube;
  }
}

// ---------------------------------------------------------------------------
// AB-decomposition

enum class ABCert { SparseA, SparseB, RegularPair, Small };

inline const char* to_string(ABCert c) {
  switch (c) {
    case ABCert::SparseA: return "SparseA";
    case ABCert::SparseB: return "SparseB";
    case ABCert::RegularPair: return "RegularPair";
    case ABCert::Small: return "Small";
  }
  return "?";
}

struct ABDecompPiece {
  IndexSet xs;
  IndexSet ys;
  IndexSet zs;
  BoolMatrix a_part;
  BoolMatrix b_part;
  ABCert cert = ABCert::SparseB;
};

inline Rational ab_gamma(unsigned d) { return Rational(1, 2 * (d + 2) * (d + 2)); }

struct ABStats {
  std::size_t reg_cube_calls = 0;
  std::size_t base_partitions = 0;
  unsigned max_depth = 0;
};

namespace detail {

struct ABInstance {
  IndexSet xs;
  IndexSet ys;
  IndexSet zs;
  BoolMatrix a;
  BoolMatrix b;
  unsigned h = 0;
};

/// Splits the 1-entries of B, row-major, into parts of at most `cap` entries.
inline std::vector<BoolMatrix> greedy_edge_partition(const BoolMatrix& b, std::uint64_t cap) {
  std::vector<BoolMatrix> parts;
  BoolMatrix cur(b.rows(), b.cols());
  std::uint64_t filled = 0;
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (Index c : b.row_indices(r)) {
      if (filled == cap) {
        parts.push_back(std::move(cur));
        cur = BoolMatrix(b.rows(), b.cols());
        filled = 0;
      }
      cur.set(r, c);
      ++filled;
    }
  }
  if (filled != 0) parts.push_back(std::move(cur));
  return parts;
}

inline void emit_ab(std::vector<ABDecompPiece>& out, const IndexSet& xs, const IndexSet& ys, const IndexSet& zs,
                    BoolMatrix a, BoolMatrix b, ABCert cert) {
  if (xs.empty() || ys.empty() || zs.empty()) return;
  a.set_labels(xs, ys);
  b.set_labels(ys, zs);
  out.push_back({xs, ys, zs, std::move(a), std::move(b), cert});
}

inline void ab_decompose(ABInstance inst, const Rational& epsilon, unsigned d, const DecompConfig& cfg,
                         std::vector<ABDecompPiece>& out, ABStats& stats) {
  const Rational gamma = ab_gamma(d);
  stats.max_depth = std::max(stats.max_depth, inst.h);
  // The residual-B recursion keeps the depth, so it runs as a loop.
  for (;;) {
    if (inst.xs.empty() || inst.ys.empty() || inst.zs.empty()) return;
    if (sparse_at(inst.b, d)) {
      emit_ab(out, inst.xs, inst.ys, inst.zs, inst.a, inst.b, ABCert::SparseB);
      return;
    }
    if (inst.h == d) {
      ++stats.base_partitions;
      const std::uint64_t cap = (static_cast<std::uint64_t>(inst.ys.size()) * inst.zs.size()) >> d;
      if (cap == 0) {
        const ABCert cert = sparse_at(inst.a, d) ? ABCert::SparseA : ABCert::Small;
        emit_ab(out, inst.xs, inst.ys, inst.zs, inst.a, inst.b, cert);
        return;
      }
      for (BoolMatrix& part : greedy_edge_partition(inst.b, cap)) {
        emit_ab(out, inst.xs, inst.ys, inst.zs, inst.a, std::move(part), ABCert::SparseB);
      }
      return;
    }
    ++stats.reg_cube_calls;
    const GoodCube cube = reg_cube(inst.a, inst.b, epsilon, gamma, d, cfg);
    for (const auto& p : cube.pieces) {
      const BoolMatrix a_l = unlabeled(p.a_part);
      const BoolMatrix b_l = unlabeled(submatrix(inst.b, p.ys, p.zs));
      const ABCert cert = sparse_at(a_l, d) ? ABCert::SparseA : ABCert::RegularPair;
      emit_ab(out, inst.xs.compose(p.xs), inst.ys.compose(p.ys), inst.zs.compose(p.zs), a_l, b_l, cert);
      const IndexSet rest = cube.z_star.minus(p.zs);
      if (rest.empty()) continue;
      ABInstance sub;
      sub.xs = inst.xs.compose(p.xs);
      sub.ys = inst.ys.compose(p.ys);
      sub.zs = inst.zs.compose(rest);
      sub.a = a_l;
      sub.b = unlabeled(submatrix(inst.b, p.ys, rest));
      sub.h = inst.h + 1;
      ab_decompose(std::move(sub), epsilon, d, cfg, out, stats);
    }
    const std::uint64_t before = inst.b.count_ones();
    inst.b = zero_rectangle(inst.b, cube.y_star, cube.z_star);
    if (inst.b.count_ones() >= before) throw std::logic_error("ab_decomposition: residual B did not shrink");
  }
}

}  // namespace detail

inline BigInt ab_volume(const std::vector<ABDecompPiece>& pieces) {
  BigInt vol = 0;
  for (const auto& p : pieces) vol += BigInt(p.xs.size()) * p.ys.size() * p.zs.size();
  return vol;
}

inline std::vector<ABDecompPiece> ab_decomposition(const BoolMatrix& a, const BoolMatrix& b, const Rational& epsilon,
                                                   unsigned d, const DecompConfig& cfg = {},
                                                   ABStats* stats_out = nullptr) {
  if (a.cols() != b.rows()) throw DimensionError("ab_decomposition: A and B do not share Y");
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("ab_decomposition: epsilon must lie in (0,1)");
  if (d < 1) throw std::invalid_argument("ab_decomposition: d >= 1");
  std::vector<ABDecompPiece> out;
  ABStats stats;
  detail::ABInstance top;
  top.xs = IndexSet::range(a.rows());
  top.ys = IndexSet::range(a.cols());
  top.zs = IndexSet::range(b.cols());
  top.a = unlabeled(a);
  top.b = unlabeled(b);
  detail::ab_decompose(std::move(top), epsilon, d, cfg, out, stats);
  const BigInt bound = BigInt(2) * (d + 2) * (d + 2) * a.rows() * a.cols() * b.cols();
  if (ab_volume(out) > bound) throw std::logic_error("ab_decomposition: volume bound violated");
  if (stats_out != nullptr) *stats_out = stats;
  return out;
}

/// Sum of the pieces' 2-path counts at global coordinates.
inline CountMatrix ab_count_sum(const std::vector<ABDecompPiece>& pieces, std::size_t nx, std::size_t nz) {
  CountMatrix sum(nx, nz);
  for (const auto& p : pieces) {
    const CountMatrix c = count_product(p.a_part, p.b_part);
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (std::size_t j = 0; j < c.cols(); ++j) sum.at(p.xs[i], p.zs[j]) += c.at(i, j);
    }
  }
  return sum;
}

inline VerifyReport verify_ab_decomposition(const std::vector<ABDecompPiece>& pieces, const BoolMatrix& a,
                                            const BoolMatrix& b, const Rational& epsilon, unsigned d,
                                            double cap = kDefaultCostCap) {
  if (a.cols() != b.rows()) throw DimensionError("verify_ab_decomposition: A and B do not share Y");
  VerifyReport rep;
  rep.piece_count = pieces.size();
  bool shapes = true;
  for (const auto& p : pieces) {
    if (!detail::indices_valid(p.xs, a.rows()) || !detail::indices_valid(p.ys, a.cols()) ||
        !detail::indices_valid(p.zs, b.cols()) || p.a_part.rows() != p.xs.size() ||
        p.a_part.cols() != p.ys.size() || p.b_part.rows() != p.ys.size() || p.b_part.cols() != p.zs.size()) {
      shapes = false;
    }
  }
  if (!shapes) {
    rep.add("property 1 (product partition)", false, "malformed piece");
    return rep;
  }
  const bool exact = ab_count_sum(pieces, a.rows(), b.cols()) == count_product(a, b);
  rep.add("property 1 (product partition)", exact);

  std::size_t bad = 0;
  for (const auto& p : pieces) {
    switch (p.cert) {
      case ABCert::SparseA: bad += sparse_at(p.a_part, d) ? 0 : 1; break;
      case ABCert::SparseB: bad += sparse_at(p.b_part, d) ? 0 : 1; break;
      case ABCert::Small: bad += (BigInt(p.ys.size()) * p.zs.size() < ipow(BigInt(2), d)) ? 0 : 1; break;
      case ABCert::RegularPair: {
        const CertCheck ca = check_regular_min_degree(p.a_part, epsilon, d, cap);
        const CertCheck cb = check_regular_min_degree(transpose(p.b_part), epsilon, d, cap);
        if (ca == CertCheck::Fail || cb == CertCheck::Fail) {
          ++bad;
        } else if (ca == CertCheck::Unchecked || cb == CertCheck::Unchecked) {
          ++rep.regularity_by_construction;
        } else {
          ++rep.regularity_exact;
        }
        break;
      }
    }
  }
  rep.add("property 2 (piece certificates)", bad == 0, std::to_string(bad) + " failing pieces");
  const BigInt bound = BigInt(2) * (d + 2) * (d + 2) * a.rows() * a.cols() * b.cols();
  const BigInt vol = ab_volume(pieces);
  rep.add("property 3 (volume bound)", vol <= bound, vol.str() + " <= " + bound.str());
  return rep;
}

// ---------------------------------------------------------------------------
// Dump format

struct DecompositionDump {
  Rational epsilon;
  unsigned d = 1;
  bool is_ab = false;
  std::vector<ADecompPiece> a_pieces;
  std::vector<ABDecompPiece> ab_pieces;
};

namespace detail {

inline void write_indices(std::ostream& out, const IndexSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) out << (i == 0 ? "" : " ") << s[i];
  out << '\n';
}

inline IndexSet read_indices(std::istream& in, std::size_t expected) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dump: missing index line");
  std::istringstream ss(line);
  std::vector<Index> v;
  std::uint64_t x = 0;
  while (ss >> x) v.push_back(static_cast<Index>(x));
  if (v.size() != expected) throw FormatError("dump: index line has the wrong length");
  try {
    return IndexSet(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("dump: ") + e.what());
  }
}

}  // namespace detail

inline void write_a_dump(std::ostream& out, const std::vector<ADecompPiece>& pieces, const Rational& epsilon,
                         unsigned d) {
  out << "PIECES " << pieces.size() << ' ' << to_string(epsilon) << ' ' << d << '\n';
  for (const auto& p : pieces) {
    out << "PIECE " << to_string(p.cert) << ' ' << p.rows.size() << ' ' << p.cols.size() << '\n';
    detail::write_indices(out, p.rows);
    detail::write_indices(out, p.cols);
    write_matrix(out, p.matrix, MatrixFormat::Sparse);
  }
}

inline void write_ab_dump(std::ostream& out, const std::vector<ABDecompPiece>& pieces, const Rational& epsilon,
                          unsigned d) {
  out << "PIECES " << pieces.size() << ' ' << to_string(epsilon) << ' ' << d << '\n';
  for (const auto& p : pieces) {
    out << "PIECE " << to_string(p.cert) << ' ' << p.xs.size() << ' ' << p.ys.size() << ' ' << p.zs.size() << '\n';
    detail::write_indices(out, p.xs);
    detail::write_indices(out, p.ys);
    detail::write_indices(out, p.zs);
    write_matrix(out, p.a_part, MatrixFormat::Sparse);
    write_matrix(out, p.b_part, MatrixFormat::Sparse);
  }
}

inline DecompositionDump read_dump(std::istream& in) {
  DecompositionDump dump;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dump: missing header");
  std::istringstream hs(line);
  std::string tag;
  std::size_t count = 0;
  std::string eps;
  hs >> tag >> count >> eps >> dump.d;
  if (tag != "PIECES" || !hs) throw FormatError("dump: bad header");
  dump.epsilon = parse_rational(eps);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw FormatError("dump: missing piece");
    std::istringstream ps(line);
    std::string cert;
    std::vector<std::size_t> sizes;
    ps >> tag >> cert;
    std::size_t s = 0;
    while (ps >> s) sizes.push_back(s);
    if (tag != "PIECE" || (sizes.size() != 2 && sizes.size() != 3)) throw FormatError("dump: bad piece line");
    const bool ab = sizes.size() == 3;
    if (i == 0) dump.is_ab = ab;
    if (ab != dump.is_ab) throw FormatError("dump: mixed piece kinds");
    if (!ab) {
      ADecompPiece p;
      if (cert == "Sparse") {
        p.cert = ACert::Sparse;
      } else if (cert == "RegularMinDeg") {
        p.cert = ACert::RegularMinDeg;
      } else {
        throw FormatError("dump: unknown certificate '" + cert + "'");
      }
      p.rows = detail::read_indices(in, sizes[0]);
      p.cols = detail::read_indices(in, sizes[1]);
      p.matrix = read_matrix(in);
      dump.a_pieces.push_back(std::move(p));
    } else {
      ABDecompPiece p;
      if (cert == "SparseA") {
        p.cert = ABCert::SparseA;
      } else if (cert == "SparseB") {
        p.cert = ABCert::SparseB;
      } else if (cert == "RegularPair") {
        p.cert = ABCert::RegularPair;
      } else if (cert == "Small") {
        p.cert = ABCert::Small;
      } else {
        throw FormatError("dump: unknown certificate '" + cert + "'");
      }
      p.xs = detail::read_indices(in, sizes[0]);
      p.ys = detail::read_indices(in, sizes[1]);
      p.zs = detail::read_indices(in, sizes[2]);
      p.a_part = read_matrix(in);
      p.b_part = read_matrix(in);
      dump.ab_pieces.push_back(std::move(p));
    }
  }
  return dump;
}

}  // namespace regbmm
