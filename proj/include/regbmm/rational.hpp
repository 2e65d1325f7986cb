#pragma once

// Exact rational arithmetic used for every threshold decision in the library.
// Densities, degrees and grid-norm powers are compared by cross-multiplication
// in arbitrary-precision integers, never in floating point.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace regbmm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt ipow(BigInt base, std::uint64_t exp) {
  BigInt result = 1;
  while (exp != 0) {
    if (exp & 1U) result *= base;
    exp >>= 1U;
    if (exp != 0) base *= base;
  }
  return result;
}

inline Rational rpow(const Rational& base, std::uint64_t exp) {
  return Rational(ipow(numerator_of(base), exp), ipow(denominator_of(base), exp));
}

/// Parses `num/den` or a bare integer. Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    if (part.empty()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::size_t start = (part.front() == '-' || part.front() == '+') ? 1 : 0;
    if (start == part.size()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(part));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// value <= 2^{-exponent}, exactly.
inline bool leq_pow2_neg(const Rational& value, std::uint64_t exponent) {
  return numerator_of(value) * ipow(BigInt(2), exponent) <= denominator_of(value);
}

/// value <= 2^{-q} for a nonnegative rational q = a/b, decided as value^b * 2^a <= 1.
inline bool leq_pow2_neg(const Rational& value, const Rational& q) {
  if (q < 0) throw std::invalid_argument("negative exponent");
  if (value <= 0) return true;
  const BigInt a = numerator_of(q);
  const BigInt b = denominator_of(q);
  const auto b64 = b.convert_to<std::uint64_t>();
  const auto a64 = a.convert_to<std::uint64_t>();
  return ipow(numerator_of(value), b64) * ipow(BigInt(2), a64) <= ipow(denominator_of(value), b64);
}

/// Real n-th root of a nonnegative rational by bisection with exact power
/// comparisons. Only used for display; decisions stay in the power domain.
inline double nth_root(const Rational& value, unsigned n, double precision = std::ldexp(1.0, -40)) {
  if (value < 0) throw std::invalid_argument("nth_root of negative value");
  if (n == 0) throw std::invalid_argument("nth_root with n = 0");
  if (value == 0) return 0.0;
  if (n == 1) return to_double(value);
  double lo = 0.0;
  double hi = value > 1 ? to_double(value) + 1.0 : 1.0;
  while (hi - lo > precision) {
    const double mid = lo + (hi - lo) / 2;
    if (rpow(Rational(mid), n) <= value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace regbmm
