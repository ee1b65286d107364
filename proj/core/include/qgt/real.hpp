#pragma once

// A positive-or-signed real that is exact when it can be and otherwise a
// 50-digit binary float with a tracked absolute error bound.

#include "qgt/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <compare>
#include <optional>
#include <string>

namespace qgt {

using Float50 = boost::multiprecision::cpp_bin_float_50;

class Real {
 public:
  Real() : exact_(Rational(0)) {}
  Real(const Rational& q) : exact_(q) {}  // NOLINT(google-explicit-constructor)
  Real(long v) : exact_(Rational(v)) {}   // NOLINT(google-explicit-constructor)
  static Real approx(const Float50& mid, const Float50& err);

  // p^e; exact when e is an integer.
  static Real prime_power(std::uint64_t p, const Rational& e);

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const;
  Float50 mid() const;
  Float50 err() const { return exact_ ? Float50(0) : err_; }
  double to_double() const;

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }

  // True when the two values are equal (exact) or their error intervals
  // overlap (approximate).
  bool same_as(const Real& o) const;
  // Strict ordering when the intervals are disjoint; "equivalent" otherwise.
  std::partial_ordering compare(const Real& o) const;
  bool definitely_less(const Real& o) const { return compare(o) == std::partial_ordering::less; }
  bool contains(const Rational& q) const;

  std::string str() const;

 private:
  std::optional<Rational> exact_;
  Float50 mid_ = 0;
  Float50 err_ = 0;
};

}  // namespace qgt
