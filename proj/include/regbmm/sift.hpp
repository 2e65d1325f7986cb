#pragma once

// Sifting: either certify (eps,k,l)-regularity or return a large rectangle
// that is denser than the matrix by a (1 + eps/2) factor.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bitmatrix.hpp"
#include "gridnorm.hpp"
#include "rational.hpp"
#include "sampler.hpp"

namespace regbmm {

struct SiftOutcome {
  bool regular = true;
  IndexSet rows;
  IndexSet cols;
  Rational achieved_density = 0;

  static SiftOutcome make_regular() { return {}; }
  static SiftOutcome denser(IndexSet rows, IndexSet cols, Rational density) {
    SiftOutcome o;
    o.regular = false;
    o.rows = std::move(rows);
    o.cols = std::move(cols);
    o.achieved_density = std::move(density);
    return o;
  }
};

struct SiftBackend {
  NormMode mode = NormMode::Exact;
  SamplingConfig sampling;
  double cost_cap = kDefaultCostCap;
};

namespace detail {

inline std::vector<RowNorm> sift_row_norms(const BoolMatrix& a, unsigned k, unsigned ell, const Rational& alpha,
                                           const SiftBackend& backend) {
  if (backend.mode == NormMode::Exact) {
    return rowlinked_norms(a, k, ell, alpha, exhaustive_family(a.rows()), exhaustive_family(a.cols()),
                           backend.cost_cap);
  }
  auto [s, t] = samplers_for(a, k, ell, alpha, backend.sampling);
  return rowlinked_norms(a, k, ell, alpha, s, t, backend.cost_cap);
}

/// One level of the recursion; `cols` names the current columns inside the
/// caller's matrix. Rows always stay the full row set.
inline SiftOutcome sift_prime_impl(const BoolMatrix& a, const IndexSet& cols, const Rational& delta,
                                   const Rational& epsilon, unsigned k, unsigned ell, const SiftBackend& backend) {
  const std::size_t nx = a.rows();
  const std::size_t ny = a.cols();
  const BigInt dnum = numerator_of(delta);
  const BigInt dden = denominator_of(delta);

  // deg(x) >= delta  <=>  count * den >= num * |Y|
  std::vector<Index> high;
  for (std::size_t x = 0; x < nx; ++x) {
    if (BigInt(a.row_count(x)) * dden >= dnum * ny) high.push_back(static_cast<Index>(x));
  }
  const std::uint64_t kl = static_cast<std::uint64_t>(k) * ell;
  if (!high.empty() && Rational(BigInt(high.size())) >= epsilon / 2 * rpow(delta, kl) * nx) {
    std::uint64_t ones = 0;
    for (Index x : high) ones += a.row_count(x);
    const Rational dens(BigInt(ones), BigInt(high.size()) * ny);
    return SiftOutcome::denser(IndexSet(std::move(high)), cols, dens);
  }
  if (k == 1) return SiftOutcome::make_regular();

  const Rational dk = rpow(delta, k);
  const Rational alpha = epsilon * delta * delta / (2 * k * k);
  const std::vector<RowNorm> v = sift_row_norms(a, k - 1, ell, alpha, backend);
  std::optional<std::size_t> best;
  for (std::size_t x = 0; x < nx; ++x) {
    if (Rational(BigInt(a.row_count(x)), BigInt(ny)) < dk) continue;
    if (!best || v[x].power > v[*best].power) best = x;
  }
  if (!best) return SiftOutcome::make_regular();

  const IndexSet yx(a.row_indices(*best));
  BoolMatrix ax = submatrix(a, IndexSet::range(nx), yx);
  ax.clear_labels();
  const Rational next_eps = epsilon * (1 - Rational(1, k * k));
  return sift_prime_impl(ax, cols.compose(yx), delta, next_eps, k - 1, ell, backend);
}

}  // namespace detail

/// Alg. Sift' on A with threshold delta; returned rectangles are in A's positions.
inline SiftOutcome sift_prime(const BoolMatrix& a, const Rational& delta, const Rational& epsilon, unsigned k,
                              unsigned ell, const SiftBackend& backend = {}) {
  if (delta <= 0 || epsilon <= 0) throw std::invalid_argument("sift_prime: delta and epsilon must be positive");
  if (k < 1 || ell < 1) throw std::invalid_argument("sift_prime: k, ell >= 1");
  if (a.empty()) throw EmptyMatrixError("sift_prime on an empty matrix");
  BoolMatrix local = a;
  local.clear_labels();
  SiftOutcome out = detail::sift_prime_impl(local, IndexSet::range(a.cols()), delta, epsilon, k, ell, backend);
  if (!out.regular) out.achieved_density = density(submatrix(local, out.rows, out.cols));
  return out;
}

/// Thm-level sift: Sift'(A, (1 + eps/2) E[A], eps/4, k, l), run on the
/// transpose when k > l. DenserRect outcomes are re-checked before returning.
inline SiftOutcome sift(const BoolMatrix& a, const Rational& epsilon, unsigned k, unsigned ell,
                        const SiftBackend& backend = {}) {
  if (epsilon <= 0) throw std::invalid_argument("sift: epsilon must be positive");
  if (k < 1 || ell < 1) throw std::invalid_argument("sift: k, ell >= 1");
  if (a.empty()) throw EmptyMatrixError("sift on an empty matrix");
  if (k > ell) {
    SiftOutcome t = sift(transpose(a), epsilon, ell, k, backend);
    if (!t.regular) std::swap(t.rows, t.cols);
    return t;
  }
  const Rational e = density(a);
  if (e == 0) return SiftOutcome::make_regular();
  SiftOutcome out = sift_prime(a, (1 + epsilon / 2) * e, epsilon / 4, k, ell, backend);
  if (out.regular) return out;
  if (out.rows.empty() || out.cols.empty()) throw std::logic_error("sift: empty denser rectangle");
  const std::uint64_t kl = static_cast<std::uint64_t>(k) * ell;
  const Rational area(BigInt(out.rows.size()) * out.cols.size());
  if (area < epsilon / 16 * rpow(e, kl) * Rational(BigInt(a.rows()) * a.cols())) {
    throw std::logic_error("sift: denser rectangle below the size guarantee");
  }
  if (out.achieved_density < (1 + epsilon / 2) * e) {
    throw std::logic_error("sift: denser rectangle below the density guarantee");
  }
  return out;
}

}  // namespace regbmm
