#pragma once

// Oblivious samplers: fixed families of index sequences over a ground set
// whose averages approximate the ground average for most family members.
//
// Exhaustive holds the whole ground set once and is exact. PairwiseHash draws
// each member as s pairwise-independent indices h(i) = ((a*i + b) mod p) mod N,
// p = 2^61 - 1, with s chosen by Chebyshev so that a member misses the
// ground average by more than epsilon with probability at most delta. Members
// are sequences and may repeat an index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bitmatrix.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace regbmm {

enum class SamplerKind { Exhaustive, PairwiseHash };

struct SamplerFamily {
  std::size_t ground_size = 0;
  Rational epsilon = 0;
  Rational delta = 0;
  SamplerKind kind = SamplerKind::Exhaustive;
  std::vector<std::vector<Index>> sets;

  std::size_t size() const { return sets.size(); }

  double estimate(std::size_t member, const std::vector<double>& f) const {
    const auto& s = sets.at(member);
    double total = 0.0;
    for (Index i : s) total += f[i];
    return total / static_cast<double>(s.size());
  }

  void validate() const {
    if (sets.empty()) throw std::logic_error("sampler family without sets");
    for (const auto& s : sets) {
      if (s.empty()) throw std::logic_error("sampler member is empty");
      for (Index i : s) {
        if (i >= ground_size) throw std::logic_error("sampler member outside ground set");
      }
    }
  }
};

inline SamplerFamily exhaustive_family(std::size_t ground_size) {
  if (ground_size == 0) throw std::invalid_argument("sampler over an empty ground set");
  SamplerFamily fam;
  fam.ground_size = ground_size;
  fam.kind = SamplerKind::Exhaustive;
  fam.sets.push_back(IndexSet::range(ground_size).members());
  return fam;
}

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(prod & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

/// Member size from Chebyshev: Var <= 1/(4s), so s = ceil(1/(2 eps^2 delta))
/// leaves a factor two of slack for the mod-N rounding.
inline std::size_t chebyshev_member_size(const Rational& epsilon, const Rational& delta) {
  const Rational bound = Rational(1) / (2 * epsilon * epsilon * delta);
  BigInt s = numerator_of(bound) / denominator_of(bound);
  if (s * denominator_of(bound) < numerator_of(bound)) s += 1;
  if (s > BigInt(std::numeric_limits<std::uint32_t>::max())) return std::numeric_limits<std::uint32_t>::max();
  return s.convert_to<std::size_t>();
}

inline SamplerFamily build_sampler(std::size_t ground_size, const Rational& epsilon, const Rational& delta,
                                   std::uint64_t seed, std::size_t members = 64) {
  if (ground_size == 0) throw std::invalid_argument("sampler over an empty ground set");
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1) {
    throw std::invalid_argument("sampler parameters must lie in (0,1)");
  }
  if (members == 0) throw std::invalid_argument("sampler needs at least one member");
  const std::size_t s = chebyshev_member_size(epsilon, delta);
  if (s >= ground_size) {
    SamplerFamily fam = exhaustive_family(ground_size);
    fam.epsilon = epsilon;
    fam.delta = delta;
    return fam;
  }
  SamplerFamily fam;
  fam.ground_size = ground_size;
  fam.epsilon = epsilon;
  fam.delta = delta;
  fam.kind = SamplerKind::PairwiseHash;
  Rng rng(seed);
  fam.sets.reserve(members);
  for (std::size_t m = 0; m < members; ++m) {
    const std::uint64_t a = 1 + rng.below(kMersenne61 - 1);
    const std::uint64_t b = rng.below(kMersenne61);
    std::vector<Index> set(s);
    for (std::size_t i = 0; i < s; ++i) {
      const std::uint64_t h = (mulmod61(a, i) + b) % kMersenne61;
      set[i] = static_cast<Index>(h % ground_size);
    }
    fam.sets.push_back(std::move(set));
  }
  return fam;
}

struct SamplerReport {
  double max_err_fraction = 0.0;
  double max_abs_error = 0.0;
};

/// Worst fraction, over the trial functions, of members whose estimate is off
/// by more than the family's epsilon.
inline SamplerReport validate_sampler(const SamplerFamily& family, const std::vector<std::vector<double>>& trials) {
  family.validate();
  const double eps = to_double(family.epsilon);
  SamplerReport report;
  for (const auto& f : trials) {
    if (f.size() != family.ground_size) throw std::invalid_argument("trial function has wrong ground size");
    double truth = 0.0;
    for (double v : f) truth += v;
    truth /= static_cast<double>(f.size());
    std::size_t failures = 0;
    for (std::size_t m = 0; m < family.size(); ++m) {
      const double err = std::fabs(family.estimate(m, f) - truth);
      report.max_abs_error = std::max(report.max_abs_error, err);
      if (err > eps + 1e-12) ++failures;
    }
    report.max_err_fraction =
        std::max(report.max_err_fraction, static_cast<double>(failures) / static_cast<double>(family.size()));
  }
  return report;
}

}  // namespace regbmm
