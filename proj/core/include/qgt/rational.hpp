#pragma once

// Exact integers and rationals shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace qgt {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                            boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                              boost::multiprecision::et_off>;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

BigInt ipow(const BigInt& base, unsigned exponent);
Rational rpow(const Rational& base, long exponent);

// p-adic valuation of a nonzero integer / rational.
long valuation(BigInt n, std::uint64_t p);
long valuation(const Rational& q, std::uint64_t p);

// Accepts "a", "-a/b" and plain decimals such as "0.6" or "-1.25e-3".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Smallest rational with denominator 2^40 that is >= x (x finite, >= 0).
Rational rational_upper_bound(long double x);
// Largest rational with denominator 2^40 that is <= x (x finite, >= 0).
Rational rational_lower_bound(long double x);

}  // namespace qgt
