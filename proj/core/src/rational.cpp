#include "qgt/rational.hpp"

#include "qgt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace qgt {

BigInt ipow(const BigInt& base, unsigned exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent != 0) b *= b;
  }
  return result;
}

Rational rpow(const Rational& base, long exponent) {
  if (exponent >= 0) {
    return Rational(ipow(numerator(base), static_cast<unsigned>(exponent)),
                    ipow(denominator(base), static_cast<unsigned>(exponent)));
  }
  if (base == 0) throw DivisionByZero("negative power of zero");
  const auto e = static_cast<unsigned>(-exponent);
  return Rational(ipow(denominator(base), e), ipow(numerator(base), e));
}

long valuation(BigInt n, std::uint64_t p) {
  if (n == 0) throw PreconditionViolation("valuation of zero");
  long v = 0;
  const BigInt bp = p;
  while (n % bp == 0) {
    n /= bp;
    ++v;
  }
  return v;
}

long valuation(const Rational& q, std::uint64_t p) {
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("bad digit in '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(digits));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(text.substr(0, slash)), whole);
    const BigInt den = parse_integer(trim(text.substr(slash + 1)), whole);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      const Rational ev = parse_rational(text.substr(e + 1));
      if (denominator(ev) != 1 || abs(ev) > 4000) {
        throw ParseError("bad exponent in '" + std::string(whole) + "'");
      }
      exponent = static_cast<long>(numerator(ev));
      text = text.substr(0, e);
    }
    std::string_view int_part = text;
    std::string_view frac_part;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      int_part = text.substr(0, dot);
      frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
      throw ParseError("empty number in '" + std::string(whole) + "'");
    }
    const BigInt ip = int_part.empty() ? BigInt(0) : parse_integer(int_part, whole);
    const BigInt fp = frac_part.empty() ? BigInt(0) : parse_integer(frac_part, whole);
    const BigInt scale = ipow(10, static_cast<unsigned>(frac_part.size()));
    value = Rational(ip * scale + fp, scale) * rpow(Rational(10), exponent);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rational_upper_bound(long double x) {
  if (!std::isfinite(x) || x < 0) throw PreconditionViolation("upper bound of a non-finite value");
  const long double scaled = std::ceil(x * 0x1p40L * (1.0L + 1e-15L)) + 1.0L;
  // scaled may exceed 64 bits for large bounds; go through decimal text.
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.0Lf", scaled);
  return Rational(BigInt(std::string(buf)), ipow(2, 40));
}

Rational rational_lower_bound(long double x) {
  if (!std::isfinite(x) || x < 0) throw PreconditionViolation("lower bound of a non-finite value");
  const long double scaled = std::max(0.0L, std::floor(x * 0x1p40L * (1.0L - 1e-15L)) - 1.0L);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.0Lf", scaled);
  return Rational(BigInt(std::string(buf)), ipow(2, 40));
}

}  // namespace qgt
