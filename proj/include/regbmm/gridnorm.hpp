#pragma once

// Grid norms ||A||_{U(k,l)}: the kl-th power is the fraction of
// (x_1..x_k, y_1..y_l) tuples, repetitions included, whose k x l grid of
// entries is all ones. Powers are exact rationals; decisions compare powers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bitmatrix.hpp"
#include "rational.hpp"
#include "sampler.hpp"

namespace regbmm {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultCostCap = 1e8;

struct RegularityParams {
  Rational epsilon = Rational(1, 160);
  unsigned k = 2;
  unsigned ell = 2;
  unsigned d = 3;

  void validate() const {
    if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (k < 1 || ell < 1 || d < 1) throw std::invalid_argument("k, ell and d must be at least 1");
  }
};

enum class NormMode { Exact, Sampled };

/// Sampler settings for the Sampled mode. Unset epsilon/delta fall back to the
/// values the sampled-norm error bound needs.
struct SamplingConfig {
  std::uint64_t seed = 1;
  std::optional<Rational> sampler_epsilon;
  std::optional<Rational> sampler_delta;
  std::size_t members = 16;
};

struct GridNorm {
  Rational power;
  unsigned k = 1;
  unsigned ell = 1;
  double value() const { return nth_root(power, k * ell); }
};

struct RowNorm {
  Rational power;  // v_x^{k l}
  unsigned exponent = 1;
  double value() const { return nth_root(power, exponent); }
};

namespace detail {

inline double pow_cost(double base, unsigned exp) { return std::pow(base, static_cast<double>(exp)); }

/// Histogram over tuples (p_1..p_r) in pool^r of popcount(start & row(p_1) & ... & row(p_r)).
/// Subtrees whose AND is already zero are credited in bulk.
inline void and_tuple_histogram(const BoolMatrix& m, const std::vector<Index>& pool, unsigned r,
                                std::vector<Word>& cur, std::vector<std::uint64_t>& hist) {
  if (r == 0) {
    std::size_t c = 0;
    for (Word w : cur) c += static_cast<std::size_t>(std::popcount(w));
    ++hist[c];
    return;
  }
  const std::size_t words = cur.size();
  std::vector<Word> next(words);
  std::uint64_t subtree = 1;
  for (unsigned i = 1; i < r; ++i) subtree *= pool.size();
  for (Index p : pool) {
    auto row = m.row(p);
    Word any = 0;
    for (std::size_t i = 0; i < words; ++i) {
      next[i] = cur[i] & row[i];
      any |= next[i];
    }
    if (any == 0) {
      hist[0] += subtree;
    } else {
      and_tuple_histogram(m, pool, r - 1, next, hist);
    }
  }
}

inline BigInt weighted_power_sum(const std::vector<std::uint64_t>& hist, unsigned exp) {
  BigInt total = 0;
  for (std::size_t c = 1; c < hist.size(); ++c) {
    if (hist[c] != 0) total += BigInt(hist[c]) * ipow(BigInt(c), exp);
  }
  return total;
}

/// Sum over k-tuples of rows of (common neighbours)^ell.
inline BigInt row_tuple_sum(const BoolMatrix& a, unsigned k, unsigned ell) {
  std::vector<Index> pool = IndexSet::range(a.rows()).members();
  std::vector<std::uint64_t> hist(a.cols() + 1, 0);
  std::vector<Word> start(a.words_per_row(), ~Word{0});
  if (a.cols() % kWordBits != 0 && !start.empty()) start.back() = (Word{1} << (a.cols() % kWordBits)) - 1;
  and_tuple_histogram(a, pool, k, start, hist);
  return weighted_power_sum(hist, ell);
}

/// Copy of A restricted to row and column sequences; repeats allowed, no labels.
inline BoolMatrix gather(const BoolMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  BoolMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (a.get(rows[i], cols[j])) out.set(i, j);
    }
  }
  return out;
}

}  // namespace detail

/// Exact kl-th power of the grid norm, evaluated along the cheaper side.
inline GridNorm grid_norm_exact(const BoolMatrix& a, unsigned k, unsigned ell, double cost_cap = kDefaultCostCap) {
  if (a.empty()) throw EmptyMatrixError("grid norm of an empty matrix");
  if (k < 1 || ell < 1) throw std::invalid_argument("grid norm needs k, ell >= 1");
  const double nx = static_cast<double>(a.rows());
  const double ny = static_cast<double>(a.cols());
  const double row_cost = detail::pow_cost(nx, k) * ny;
  const double col_cost = detail::pow_cost(ny, ell) * nx;
  if (std::min(row_cost, col_cost) > cost_cap) {
    throw InfeasibleError("exact grid norm exceeds the cost cap; use the sampled estimate");
  }
  GridNorm g;
  g.k = k;
  g.ell = ell;
  if (row_cost <= col_cost) {
    const BigInt sum = detail::row_tuple_sum(a, k, ell);
    g.power = Rational(sum, ipow(BigInt(a.rows()), k) * ipow(BigInt(a.cols()), ell));
  } else {
    const BoolMatrix t = transpose(a);
    const BigInt sum = detail::row_tuple_sum(t, ell, k);
    g.power = Rational(sum, ipow(BigInt(a.cols()), ell) * ipow(BigInt(a.rows()), k));
  }
  return g;
}

/// Average over sampler pairs (S, T) of ||A[S,T]||^{kl}.
inline GridNorm grid_norm_estimate(const BoolMatrix& a, unsigned k, unsigned ell, const SamplerFamily& rows,
                                   const SamplerFamily& cols, double cost_cap = kDefaultCostCap) {
  if (rows.ground_size != a.rows() || cols.ground_size != a.cols()) {
    throw DimensionError("sampler ground sets do not match the matrix");
  }
  rows.validate();
  cols.validate();
  Rational total = 0;
  for (const auto& s : rows.sets) {
    for (const auto& t : cols.sets) {
      total += grid_norm_exact(detail::gather(a, s, t), k, ell, cost_cap).power;
    }
  }
  GridNorm g;
  g.k = k;
  g.ell = ell;
  g.power = total / Rational(BigInt(rows.size()) * cols.size());
  return g;
}

/// v_x approximating ||A_x||_{U(k,l)} with A_x = A[X, N(x)]. Rows of degree 0 get 0.
inline std::vector<RowNorm> rowlinked_norms(const BoolMatrix& a, unsigned k, unsigned ell, const Rational& alpha,
                                            const SamplerFamily& rows, const SamplerFamily& cols,
                                            double cost_cap = kDefaultCostCap) {
  if (alpha <= 0) throw std::invalid_argument("rowlinked_norms: alpha must be positive");
  if (k < 1 || ell < 1) throw std::invalid_argument("rowlinked_norms: k, ell >= 1");
  if (rows.ground_size != a.rows() || cols.ground_size != a.cols()) {
    throw DimensionError("sampler ground sets do not match the matrix");
  }
  rows.validate();
  cols.validate();
  const std::size_t nx = a.rows();
  std::vector<BigInt> sums(nx, 0);
  Rational per_pair_scale = 0;
  double cost = 0.0;
  for (const auto& s : rows.sets) {
    for (const auto& t : cols.sets) {
      const double xo = static_cast<double>(nx) * detail::pow_cost(static_cast<double>(s.size()), k) *
                        static_cast<double>(words_for(t.size()));
      const double yo = detail::pow_cost(static_cast<double>(t.size()), ell) *
                        static_cast<double>(words_for(s.size()) + words_for(nx));
      cost += std::min(xo, yo);
    }
  }
  if (cost > cost_cap) throw InfeasibleError("rowlinked_norms exceeds the cost cap");

  std::vector<Index> all_rows = IndexSet::range(nx).members();
  // Every pair contributes sum / (|S|^k |T|^l); the members of one family
  // share a size, so a common denominator per pair is kept.
  std::vector<Rational> acc(nx, 0);
  for (const auto& s : rows.sets) {
    for (const auto& t : cols.sets) {
      const BoolMatrix gx = detail::gather(a, all_rows, t);
      const BigInt denom = ipow(BigInt(s.size()), k) * ipow(BigInt(t.size()), ell);
      const double xo = static_cast<double>(nx) * detail::pow_cost(static_cast<double>(s.size()), k) *
                        static_cast<double>(words_for(t.size()));
      const double yo = detail::pow_cost(static_cast<double>(t.size()), ell) *
                        static_cast<double>(words_for(s.size()) + words_for(nx));
      if (xo <= yo) {
        // x-side: for each x, tuples x_1..x_k in S^k, count common neighbours inside T.
        std::vector<Index> pool(s.begin(), s.end());
        for (std::size_t x = 0; x < nx; ++x) {
          if (gx.row_count(x) == 0) continue;
          std::vector<std::uint64_t> hist(t.size() + 1, 0);
          std::vector<Word> start(gx.row(x).begin(), gx.row(x).end());
          detail::and_tuple_histogram(gx, pool, k, start, hist);
          acc[x] += Rational(detail::weighted_power_sum(hist, ell), denom);
        }
      } else {
        // y-side: tuples y_1..y_l in T^l; weight (common S-neighbours)^k credited to
        // every x adjacent to all of them.
        const BoolMatrix st = transpose(detail::gather(a, s, t));  // |T| x |S|
        const BoolMatrix xt = transpose(gx);                        // |T| x |X|
        std::vector<std::vector<std::uint64_t>> hist(nx, std::vector<std::uint64_t>(s.size() + 1, 0));
        std::vector<Word> s_start(st.words_per_row(), ~Word{0});
        if (s.size() % kWordBits != 0 && !s_start.empty()) s_start.back() = (Word{1} << (s.size() % kWordBits)) - 1;
        std::vector<Word> x_start(xt.words_per_row(), ~Word{0});
        if (nx % kWordBits != 0 && !x_start.empty()) x_start.back() = (Word{1} << (nx % kWordBits)) - 1;
        auto walk = [&](auto&& self, unsigned depth, const std::vector<Word>& and_s,
                        const std::vector<Word>& and_x) -> void {
          if (depth == ell) {
            std::size_t c = 0;
            for (Word w : and_s) c += static_cast<std::size_t>(std::popcount(w));
            if (c == 0) return;
            for (std::size_t wi = 0; wi < and_x.size(); ++wi) {
              Word w = and_x[wi];
              while (w != 0) {
                ++hist[wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w))][c];
                w &= w - 1;
              }
            }
            return;
          }
          std::vector<Word> ns(and_s.size());
          std::vector<Word> nxw(and_x.size());
          for (std::size_t j = 0; j < t.size(); ++j) {
            auto rs = st.row(j);
            auto rx = xt.row(j);
            Word any_s = 0;
            Word any_x = 0;
            for (std::size_t i = 0; i < ns.size(); ++i) any_s |= (ns[i] = and_s[i] & rs[i]);
            for (std::size_t i = 0; i < nxw.size(); ++i) any_x |= (nxw[i] = and_x[i] & rx[i]);
            if (any_s == 0 || any_x == 0) continue;
            self(self, depth + 1, ns, nxw);
          }
        };
        walk(walk, 0, s_start, x_start);
        for (std::size_t x = 0; x < nx; ++x) {
          acc[x] += Rational(detail::weighted_power_sum(hist[x], k), denom);
        }
      }
    }
  }
  per_pair_scale = Rational(1) / Rational(BigInt(rows.size()) * cols.size());
  std::vector<RowNorm> out(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    out[x].exponent = k * ell;
    const std::size_t deg = a.row_count(x);
    if (deg == 0) {
      out[x].power = 0;
      continue;
    }
    const Rational u = acc[x] * per_pair_scale;
    out[x].power = u / rpow(Rational(BigInt(deg), BigInt(a.cols())), ell);
  }
  return out;
}

/// Sampler pair for the sampled-norm error bound: epsilon = delta = alpha^{kl}/(2k+2l+2)
/// unless the config overrides them.
inline std::pair<SamplerFamily, SamplerFamily> samplers_for(const BoolMatrix& a, unsigned k, unsigned ell,
                                                           const Rational& alpha, const SamplingConfig& cfg) {
  Rational base = rpow(alpha, static_cast<std::uint64_t>(k) * ell) / Rational(2 * k + 2 * ell + 2);
  if (base >= 1) base = Rational(1, 2);
  const Rational se = cfg.sampler_epsilon.value_or(base);
  const Rational sd = cfg.sampler_delta.value_or(base);
  return {build_sampler(a.rows(), se, sd, cfg.seed, cfg.members),
          build_sampler(a.cols(), se, sd, cfg.seed ^ 0x9e3779b97f4a7c15ULL, cfg.members)};
}

/// ||A||_{U(k,l)} <= (1+eps) E[A], decided on kl-th powers.
inline bool is_regular(const BoolMatrix& a, const RegularityParams& params, NormMode mode = NormMode::Exact,
                       const SamplingConfig& cfg = {}, double cost_cap = kDefaultCostCap) {
  params.validate();
  if (a.empty()) throw EmptyMatrixError("regularity of an empty matrix");
  const Rational e = density(a);
  const std::uint64_t kl = static_cast<std::uint64_t>(params.k) * params.ell;
  const Rational bound = rpow((1 + params.epsilon) * e, kl);
  if (mode == NormMode::Exact) {
    try {
      return grid_norm_exact(a, params.k, params.ell, cost_cap).power <= bound;
    } catch (const InfeasibleError&) {
      throw InfeasibleError("exact regularity check exceeds the cost cap; use NormMode::Sampled");
    }
  }
  const Rational alpha = params.epsilon * e / 2;
  auto [s, t] = samplers_for(a, params.k, params.ell, alpha > 0 ? alpha : Rational(1, 2), cfg);
  return grid_norm_estimate(a, params.k, params.ell, s, t, cost_cap).power <= bound;
}

/// min over rows of deg(x) >= (1 - eps) E[A].
inline bool is_min_degree(const BoolMatrix& a, const Rational& epsilon) {
  if (a.empty()) throw EmptyMatrixError("min-degree of an empty matrix");
  const std::uint64_t total = a.count_ones();
  std::size_t lo = a.cols();
  for (std::size_t r = 0; r < a.rows(); ++r) lo = std::min(lo, a.row_count(r));
  // lo/|Y| >= (1-eps) total/(|X||Y|)  <=>  lo*|X| >= (1-eps) total
  return Rational(BigInt(lo) * a.rows()) >= (1 - epsilon) * Rational(BigInt(total));
}

struct UniformityCert {
  Rational alpha;
  Rational eps_band;
  Rational delta_exponent;  // the delta fraction is 2^{-delta_exponent}
  Rational outside_fraction;
  bool premise_holds = false;

  double delta_frac() const { return std::exp2(-to_double(delta_exponent)); }
  bool within_delta() const { return leq_pow2_neg(outside_fraction, delta_exponent); }
};

/// Measures the fraction of (x,z) with (A o B)(x,z) outside [(1-80e)a, (1+80e)a],
/// a = E[A]E[B]. The band is clamped at zero from below.
inline UniformityCert check_uniform_product(const BoolMatrix& a, const BoolMatrix& b, const RegularityParams& params) {
  if (a.cols() != b.rows()) throw DimensionError("check_uniform_product: inner dimensions differ");
  if (a.empty() || b.empty()) throw EmptyMatrixError("check_uniform_product on an empty matrix");
  UniformityCert cert;
  cert.alpha = density(a) * density(b);
  cert.eps_band = 80 * params.epsilon;
  cert.delta_exponent = params.epsilon * params.d / 2;
  cert.premise_holds = params.epsilon < Rational(1, 80) && params.epsilon * params.d >= 2;
  const CountMatrix counts = count_product(a, b);
  const Rational lo = (1 - cert.eps_band) * cert.alpha * a.cols();
  const Rational hi = (1 + cert.eps_band) * cert.alpha * a.cols();
  std::uint64_t outside = 0;
  for (std::size_t x = 0; x < counts.rows(); ++x) {
    for (std::size_t z = 0; z < counts.cols(); ++z) {
      const Rational v(counts.at(x, z));
      if (v < lo || v > hi) ++outside;
    }
  }
  cert.outside_fraction = Rational(BigInt(outside), BigInt(counts.rows()) * counts.cols());
  return cert;
}

/// If a = b +- e with a, b in [0,1], then a^k = b^k +- bound; returns that bound.
inline Rational power_error_bound(const Rational& e, unsigned k) { return 2 * e * k; }

/// If a^k = b^k +- e^k then a = b +- e: the root-domain error for a power-domain error.
inline double root_error_bound(const Rational& power_error, unsigned k) { return nth_root(power_error, k); }

}  // namespace regbmm
