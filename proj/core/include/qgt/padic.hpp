#pragma once

// Fixed-precision elements of Q_p.
//
// A nonzero number is stored as p^v * u with u a unit known modulo p^N, where
// N is its count of significant digits. Results are truncated, never rounded:
// every digit a value reports is correct. Products keep min(N1, N2) digits;
// sums keep whatever absolute precision both operands guarantee, so
// subtracting close numbers visibly shrinks N. A sum that cancels every
// guaranteed digit becomes the zero marker.

#include "qgt/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qgt {

struct PrecisionContext {
  unsigned digits = 32;

  // QGT_PRECISION overrides the default when set to a positive integer.
  static PrecisionContext from_environment();
};

// Named subgroups of Q_p used for membership tests: Z_p, Z_p^*, 1 + p^k Z_p.
struct NamedSubgroup {
  enum class Kind { Integers, Units, PrincipalUnits };
  Kind kind = Kind::Integers;
  unsigned level = 1;  // k for 1 + p^k Z_p

  static NamedSubgroup integers() { return {Kind::Integers, 0}; }
  static NamedSubgroup units() { return {Kind::Units, 0}; }
  static NamedSubgroup principal_units(unsigned k = 1) { return {Kind::PrincipalUnits, k}; }
};

class PadicNumber {
 public:
  static PadicNumber zero(std::uint64_t p);
  static PadicNumber from_rational(const BigInt& numerator, const BigInt& denominator,
                                   std::uint64_t p, PrecisionContext ctx = {});
  static PadicNumber from_rational(const Rational& q, std::uint64_t p, PrecisionContext ctx = {});
  // Digits are low-order first; the first digit must be nonzero.
  static PadicNumber from_digits(std::uint64_t p, long valuation,
                                 const std::vector<std::uint32_t>& digits);
  // "p=<prime> v=<valuation> digits=<d0,d1,...>", zero is "v=inf digits=".
  static PadicNumber parse(std::string_view text);

  std::uint64_t prime() const { return prime_; }
  bool is_zero() const { return zero_; }
  long valuation() const;
  unsigned precision() const { return zero_ ? 0 : precision_; }
  // Absolute precision v + N; zero is exact.
  long absolute_precision() const;
  const BigInt& unit() const { return unit_; }
  std::vector<std::uint32_t> digits() const;

  // |x|_p = p^(-v); zero has norm 0.
  Rational norm() const;
  bool member(NamedSubgroup group) const;
  // x mod p^k for x in Z_p; needs absolute precision >= k.
  BigInt residue(unsigned k) const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);
  PadicNumber inverse() const;

  // Equal when primes and valuations agree and the units agree to the
  // smaller precision.
  friend bool operator==(const PadicNumber& x, const PadicNumber& y);

  std::string to_text() const;

 private:
  PadicNumber(std::uint64_t p, long v, unsigned n, BigInt unit);

  std::uint64_t prime_ = 2;
  bool zero_ = true;
  long valuation_ = 0;
  unsigned precision_ = 0;
  BigInt unit_ = 0;
};

PadicNumber add(const PadicNumber& x, const PadicNumber& y);
PadicNumber sub(const PadicNumber& x, const PadicNumber& y);
PadicNumber mul(const PadicNumber& x, const PadicNumber& y);
PadicNumber inv(const PadicNumber& x);
inline Rational norm(const PadicNumber& x) { return x.norm(); }
inline bool member(const PadicNumber& x, NamedSubgroup s) { return x.member(s); }

// Inverse of a unit modulo m (gcd(a, m) == 1).
BigInt inverse_mod(const BigInt& a, const BigInt& m);

}  // namespace qgt
