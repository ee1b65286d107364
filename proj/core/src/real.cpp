#include "qgt/real.hpp"

#include "qgt/errors.hpp"

#include <iomanip>
#include <sstream>

namespace qgt {

namespace {

Float50 to_float(const Rational& q) {
  return Float50(numerator(q)) / Float50(denominator(q));
}

// Relative rounding slack added by each approximate operation.
Float50 rounding(const Float50& v) { return abs(v) * Float50("1e-48") + Float50("1e-300"); }

}  // namespace

Real Real::approx(const Float50& mid, const Float50& err) {
  Real r;
  r.exact_.reset();
  r.mid_ = mid;
  r.err_ = abs(err);
  return r;
}

Real Real::prime_power(std::uint64_t p, const Rational& e) {
  if (denominator(e) == 1) {
    return Real(rpow(Rational(p), static_cast<long>(numerator(e))));
  }
  const Float50 v = boost::multiprecision::pow(Float50(p), to_float(e));
  return approx(v, abs(v) * Float50("1e-45"));
}

const Rational& Real::exact() const {
  if (!exact_) throw PreconditionViolation("exact value requested from approximate real " + str());
  return *exact_;
}

Float50 Real::mid() const { return exact_ ? to_float(*exact_) : mid_; }

double Real::to_double() const { return exact_ ? qgt::to_double(*exact_) : mid_.convert_to<double>(); }

Real Real::operator-() const {
  if (exact_) return Real(Rational(-*exact_));
  return approx(-mid_, err_);
}

Real operator+(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) return Real(Rational(*a.exact_ + *b.exact_));
  const Float50 m = a.mid() + b.mid();
  return Real::approx(m, a.err() + b.err() + rounding(m));
}

Real operator-(const Real& a, const Real& b) { return a + (-b); }

Real operator*(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) return Real(Rational(*a.exact_ * *b.exact_));
  const Float50 am = a.mid(), bm = b.mid();
  const Float50 m = am * bm;
  return Real::approx(m, abs(am) * b.err() + abs(bm) * a.err() + a.err() * b.err() + rounding(m));
}

Real operator/(const Real& a, const Real& b) {
  if (b.exact_ && *b.exact_ == 0) throw DivisionByZero("real division by zero");
  if (a.exact_ && b.exact_) return Real(Rational(*a.exact_ / *b.exact_));
  const Float50 am = a.mid(), bm = b.mid();
  const Float50 lo = abs(bm) - b.err();
  if (lo <= 0) throw DivisionByZero("divisor interval contains zero");
  const Float50 m = am / bm;
  // |a/b - am/bm| <= (|a - am| + |am/bm| |b - bm|) / |b|
  return Real::approx(m, (a.err() + abs(m) * b.err()) / lo + rounding(m));
}

bool Real::same_as(const Real& o) const {
  if (exact_ && o.exact_) return *exact_ == *o.exact_;
  return abs(mid() - o.mid()) <= err() + o.err();
}

std::partial_ordering Real::compare(const Real& o) const {
  if (exact_ && o.exact_) {
    if (*exact_ < *o.exact_) return std::partial_ordering::less;
    if (*exact_ > *o.exact_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  const Float50 gap = mid() - o.mid();
  const Float50 slack = err() + o.err();
  if (gap < -slack) return std::partial_ordering::less;
  if (gap > slack) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool Real::contains(const Rational& q) const {
  if (exact_) return *exact_ == q;
  return abs(mid_ - to_float(q)) <= err_;
}

std::string Real::str() const {
  if (exact_) return to_string(*exact_);
  std::ostringstream os;
  os.precision(20);
  os << mid_ << "+-" << std::setprecision(3) << err_;
  return os.str();
}

}  // namespace qgt
