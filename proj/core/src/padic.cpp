#include "qgt/padic.hpp"

#include "qgt/errors.hpp"

#include <charconv>
#include <cstdlib>

namespace qgt {

PrecisionContext PrecisionContext::from_environment() {
  PrecisionContext ctx;
  if (const char* env = std::getenv("QGT_PRECISION"); env != nullptr && *env != '\0') {
    const long v = std::strtol(env, nullptr, 10);
    if (v <= 0 || v > 4096) throw ParseError("QGT_PRECISION must be a positive integer");
    ctx.digits = static_cast<unsigned>(v);
  }
  return ctx;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = a % m, r = m;
  if (old_r < 0) old_r += m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw DivisionByZero("element is not invertible modulo " + m.str());
  old_s %= m;
  if (old_s < 0) old_s += m;
  return old_s;
}

namespace {

void require_prime(std::uint64_t p) {
  if (p < 2) throw PreconditionViolation("prime must be >= 2");
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) throw PreconditionViolation(std::to_string(p) + " is not prime");
  }
}

void require_same_prime(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime() != y.prime()) {
    throw PrimeMismatch("operands live in Q_" + std::to_string(x.prime()) + " and Q_" +
                        std::to_string(y.prime()));
  }
}

BigInt reduce(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

PadicNumber::PadicNumber(std::uint64_t p, long v, unsigned n, BigInt unit)
    : prime_(p), zero_(false), valuation_(v), precision_(n), unit_(std::move(unit)) {}

PadicNumber PadicNumber::zero(std::uint64_t p) {
  PadicNumber z(p, 0, 0, 0);
  z.zero_ = true;
  return z;
}

PadicNumber PadicNumber::from_rational(const BigInt& num, const BigInt& den, std::uint64_t p,
                                       PrecisionContext ctx) {
  if (den == 0) throw DivisionByZero("zero denominator");
  if (ctx.digits == 0) throw PreconditionViolation("precision must be positive");
  require_prime(p);
  if (num == 0) return zero(p);
  const BigInt bp = p;
  BigInt a = num, b = den;
  long v = 0;
  while (a % bp == 0) { a /= bp; ++v; }
  while (b % bp == 0) { b /= bp; --v; }
  const BigInt modulus = ipow(bp, ctx.digits);
  BigInt u = reduce(reduce(a, modulus) * inverse_mod(b, modulus), modulus);
  return PadicNumber(p, v, ctx.digits, std::move(u));
}

PadicNumber PadicNumber::from_rational(const Rational& q, std::uint64_t p, PrecisionContext ctx) {
  return from_rational(numerator(q), denominator(q), p, ctx);
}

PadicNumber PadicNumber::from_digits(std::uint64_t p, long valuation,
                                     const std::vector<std::uint32_t>& digits) {
  require_prime(p);
  if (digits.empty()) throw ParseError("nonzero p-adic number needs at least one digit");
  if (digits.front() == 0) throw ParseError("leading unit digit must be nonzero");
  BigInt u = 0;
  const BigInt bp = p;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it >= p) throw ParseError("digit " + std::to_string(*it) + " out of range for p=" + std::to_string(p));
    u = u * bp + *it;
  }
  return PadicNumber(p, valuation, static_cast<unsigned>(digits.size()), std::move(u));
}

long PadicNumber::valuation() const {
  if (zero_) throw PreconditionViolation("valuation of zero is infinite");
  return valuation_;
}

long PadicNumber::absolute_precision() const {
  if (zero_) throw PreconditionViolation("zero is exact");
  return valuation_ + static_cast<long>(precision_);
}

std::vector<std::uint32_t> PadicNumber::digits() const {
  std::vector<std::uint32_t> out;
  if (zero_) return out;
  out.reserve(precision_);
  BigInt u = unit_;
  const BigInt bp = prime_;
  for (unsigned i = 0; i < precision_; ++i) {
    out.push_back(static_cast<std::uint32_t>(u % bp));
    u /= bp;
  }
  return out;
}

Rational PadicNumber::norm() const {
  if (zero_) return 0;
  return rpow(Rational(prime_), -valuation_);
}

bool PadicNumber::member(NamedSubgroup group) const {
  switch (group.kind) {
    case NamedSubgroup::Kind::Integers:
      return zero_ || valuation_ >= 0;
    case NamedSubgroup::Kind::Units:
      return !zero_ && valuation_ == 0;
    case NamedSubgroup::Kind::PrincipalUnits: {
      if (zero_ || valuation_ != 0) return false;
      if (group.level == 0) return true;
      if (precision_ < group.level) {
        throw PrecisionLoss("membership in 1+p^" + std::to_string(group.level) +
                            "Z_p needs that many digits");
      }
      return unit_ % ipow(BigInt(prime_), group.level) == 1 % ipow(BigInt(prime_), group.level);
    }
  }
  return false;
}

BigInt PadicNumber::residue(unsigned k) const {
  const BigInt modulus = ipow(BigInt(prime_), k);
  if (zero_) return 0;
  if (valuation_ < 0) throw PreconditionViolation("residue of a non-integral p-adic number");
  if (valuation_ >= static_cast<long>(k)) return 0;
  if (absolute_precision() < static_cast<long>(k)) {
    throw PrecisionLoss("residue mod p^" + std::to_string(k) + " exceeds guaranteed precision");
  }
  return reduce(unit_ * ipow(BigInt(prime_), static_cast<unsigned>(valuation_)), modulus);
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  const BigInt modulus = ipow(BigInt(prime_), precision_);
  return PadicNumber(prime_, valuation_, precision_, reduce(-unit_, modulus));
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (x.zero_) return y;
  if (y.zero_) return x;
  const BigInt bp = x.prime_;
  const long v = std::min(x.valuation_, y.valuation_);
  const long absolute = std::min(x.absolute_precision(), y.absolute_precision());
  const auto width = static_cast<unsigned>(absolute - v);
  const BigInt modulus = ipow(bp, width);
  BigInt s = x.unit_ * ipow(bp, static_cast<unsigned>(x.valuation_ - v)) +
             y.unit_ * ipow(bp, static_cast<unsigned>(y.valuation_ - v));
  s = reduce(s, modulus);
  if (s == 0) return PadicNumber::zero(x.prime_);
  unsigned shift = 0;
  while (s % bp == 0) {
    s /= bp;
    ++shift;
  }
  return PadicNumber(x.prime_, v + static_cast<long>(shift), width - shift, std::move(s));
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (x.zero_ || y.zero_) return PadicNumber::zero(x.prime_);
  const unsigned n = std::min(x.precision_, y.precision_);
  const BigInt modulus = ipow(BigInt(x.prime_), n);
  return PadicNumber(x.prime_, x.valuation_ + y.valuation_, n,
                     reduce(x.unit_ * y.unit_, modulus));
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) throw DivisionByZero("inverse of zero in Q_" + std::to_string(prime_));
  const BigInt modulus = ipow(BigInt(prime_), precision_);
  return PadicNumber(prime_, -valuation_, precision_, inverse_mod(unit_, modulus));
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  return x * y.inverse();
}

bool operator==(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime_ != y.prime_) return false;
  if (x.zero_ || y.zero_) return x.zero_ == y.zero_;
  if (x.valuation_ != y.valuation_) return false;
  const BigInt modulus = ipow(BigInt(x.prime_), std::min(x.precision_, y.precision_));
  return x.unit_ % modulus == y.unit_ % modulus;
}

std::string PadicNumber::to_text() const {
  std::string out = "p=" + std::to_string(prime_) + " v=";
  if (zero_) return out + "inf digits=";
  out += std::to_string(valuation_) + " digits=";
  const auto ds = digits();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(ds[i]);
  }
  return out;
}

namespace {

std::string_view expect_field(std::string_view& text, std::string_view key) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  if (text.substr(0, key.size()) != key) {
    throw ParseError("expected '" + std::string(key) + "' in p-adic text");
  }
  text.remove_prefix(key.size());
  const auto end = text.find(' ');
  std::string_view value = text.substr(0, end);
  text = end == std::string_view::npos ? std::string_view{} : text.substr(end);
  return value;
}

template <typename T>
T parse_number(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "' in p-adic text");
  }
  return value;
}

}  // namespace

PadicNumber PadicNumber::parse(std::string_view text) {
  const auto p = parse_number<std::uint64_t>(expect_field(text, "p="));
  const std::string_view v = expect_field(text, "v=");
  const std::string_view ds = expect_field(text, "digits=");
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  if (!text.empty()) throw ParseError("trailing text after p-adic digits");
  if (v == "inf") {
    if (!ds.empty()) throw ParseError("zero carries no digits");
    require_prime(p);
    return zero(p);
  }
  std::vector<std::uint32_t> digits;
  std::string_view rest = ds;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    digits.push_back(parse_number<std::uint32_t>(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) throw ParseError("trailing comma in digits");
  }
  return from_digits(p, parse_number<long>(v), digits);
}

PadicNumber add(const PadicNumber& x, const PadicNumber& y) { return x + y; }
PadicNumber sub(const PadicNumber& x, const PadicNumber& y) { return x - y; }
PadicNumber mul(const PadicNumber& x, const PadicNumber& y) { return x * y; }
PadicNumber inv(const PadicNumber& x) { return x.inverse(); }

}  // namespace qgt
