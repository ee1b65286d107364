#include "qgt/haar.hpp"

#include "qgt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace qgt {

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Add: return "ADD";
    case MeasureKind::Mult: return "MULT";
    case MeasureKind::Mu: return "MU";
    case MeasureKind::Nu: return "NU";
  }
  return "?";
}

MeasureKind parse_measure_kind(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t == "ADD") return MeasureKind::Add;
  if (t == "MULT") return MeasureKind::Mult;
  if (t == "MU") return MeasureKind::Mu;
  if (t == "NU") return MeasureKind::Nu;
  throw ParseError("unknown measure kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// SetExpr

SetExpr::Kind SetExpr::kind() const { return node_->kind; }

SetExpr SetExpr::ball(const Rational& center, long level) {
  return SetExpr(std::make_shared<const Node>(Node{Kind::Ball, center, level, {}}));
}
SetExpr SetExpr::sphere(long n) {
  return SetExpr(std::make_shared<const Node>(Node{Kind::Sphere, 0, n, {}}));
}
SetExpr SetExpr::units() { return SetExpr(std::make_shared<const Node>(Node{Kind::Units, 0, 0, {}})); }
SetExpr SetExpr::principal_units(unsigned level) {
  if (level == 0) throw PreconditionViolation("1 + p^k Z_p needs k >= 1");
  return SetExpr(std::make_shared<const Node>(Node{Kind::PrincipalUnits, 0, static_cast<long>(level), {}}));
}
SetExpr SetExpr::translate(const SetExpr& base, const Rational& shift) {
  return SetExpr(std::make_shared<const Node>(Node{Kind::Translate, shift, 0, {base}}));
}
SetExpr SetExpr::unite(const SetExpr& a, const SetExpr& b) {
  return SetExpr(std::make_shared<const Node>(Node{Kind::Union, 0, 0, {a, b}}));
}

std::string SetExpr::str() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Ball: return "ball(" + to_string(n.value) + ", " + std::to_string(n.level) + ")";
    case Kind::Sphere: return "sphere(" + std::to_string(n.level) + ")";
    case Kind::Units: return "units";
    case Kind::PrincipalUnits:
      return n.level == 1 ? "one_plus_p" : "one_plus_p(" + std::to_string(n.level) + ")";
    case Kind::Translate: return "translate(" + n.children[0].str() + ", " + to_string(n.value) + ")";
    case Kind::Union: return "union(" + n.children[0].str() + ", " + n.children[1].str() + ")";
  }
  return "?";
}

namespace {

class SetParser {
 public:
  explicit SetParser(std::string_view text) : text_(text) {}

  SetExpr parse_all() {
    SetExpr s = parse_set();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("set grammar: " + why + " at offset " + std::to_string(pos_) + " in '" +
                     std::string(text_) + "'");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string_view argument() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    return text_.substr(start, pos_ - start);
  }
  long integer() {
    const Rational q = parse_rational(argument());
    if (denominator(q) != 1) fail("expected an integer");
    return static_cast<long>(numerator(q));
  }

  SetExpr parse_set() {
    const std::string w = word();
    if (w == "units") return SetExpr::units();
    if (w == "one_plus_p") {
      if (accept('(')) {
        const long k = integer();
        expect(')');
        if (k < 1) fail("one_plus_p level must be >= 1");
        return SetExpr::principal_units(static_cast<unsigned>(k));
      }
      return SetExpr::principal_units(1);
    }
    if (w == "ball") {
      expect('(');
      const Rational c = parse_rational(argument());
      expect(',');
      const long k = integer();
      expect(')');
      return SetExpr::ball(c, k);
    }
    if (w == "sphere") {
      expect('(');
      const long n = integer();
      expect(')');
      return SetExpr::sphere(n);
    }
    if (w == "translate") {
      expect('(');
      SetExpr base = parse_set();
      expect(',');
      const Rational t = parse_rational(argument());
      expect(')');
      return SetExpr::translate(base, t);
    }
    if (w == "union") {
      expect('(');
      SetExpr a = parse_set();
      expect(',');
      SetExpr b = parse_set();
      expect(')');
      return SetExpr::unite(a, b);
    }
    fail(w.empty() ? "expected a set" : "unknown set '" + w + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SetExpr SetExpr::parse(std::string_view text) { return SetParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// CompactOpenSet

namespace {

constexpr std::uint64_t kModulusLimit = std::uint64_t{1} << 62;
constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 26;

bool is_small_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// p^k as uint64, throwing when it does not fit comfortably.
std::uint64_t power_u64(std::uint64_t p, long k) {
  if (k < 0) throw PreconditionViolation("negative exponent");
  std::uint64_t r = 1;
  for (long i = 0; i < k; ++i) {
    if (r > kModulusLimit / p) {
      throw ResolutionTooFine("p^" + std::to_string(k) + " exceeds 62 bits for p=" + std::to_string(p));
    }
    r *= p;
  }
  return r;
}

long valuation_or(const Rational& q, std::uint64_t p, long if_zero) {
  return q == 0 ? if_zero : valuation(q, p);
}

long lower_level_of(const SetExpr& s, std::uint64_t p) {
  const auto& n = s.node();
  switch (n.kind) {
    case SetExpr::Kind::Ball: return std::min(n.level, valuation_or(n.value, p, n.level));
    case SetExpr::Kind::Sphere: return n.level;
    case SetExpr::Kind::Units:
    case SetExpr::Kind::PrincipalUnits: return 0;
    case SetExpr::Kind::Translate: {
      const long e = lower_level_of(n.children[0], p);
      return std::min(e, valuation_or(n.value, p, e));
    }
    case SetExpr::Kind::Union:
      return std::min(lower_level_of(n.children[0], p), lower_level_of(n.children[1], p));
  }
  return 0;
}

long resolution_of(const SetExpr& s) {
  const auto& n = s.node();
  switch (n.kind) {
    case SetExpr::Kind::Ball: return n.level;
    case SetExpr::Kind::Sphere: return n.level + 1;
    case SetExpr::Kind::Units: return 1;
    case SetExpr::Kind::PrincipalUnits: return n.level;
    case SetExpr::Kind::Translate: return resolution_of(n.children[0]);
    case SetExpr::Kind::Union:
      return std::max(resolution_of(n.children[0]), resolution_of(n.children[1]));
  }
  return 0;
}

// (q * p^-base) mod p^width for q with v(q) >= base.
std::uint64_t scaled_residue(const Rational& q, std::uint64_t p, long base, std::uint64_t modulus) {
  if (q == 0) return 0;
  const Rational scaled = q * rpow(Rational(p), -base);
  const BigInt m = modulus;
  BigInt r = numerator(scaled) % m;
  if (r < 0) r += m;
  r = (r * inverse_mod(denominator(scaled), m)) % m;
  return static_cast<std::uint64_t>(r);
}

using Predicate = std::function<bool(std::uint64_t)>;

Predicate compile(const SetExpr& s, std::uint64_t p, long base, long level) {
  const auto& n = s.node();
  const std::uint64_t modulus = power_u64(p, level - base);
  switch (n.kind) {
    case SetExpr::Kind::Ball: {
      if (n.level <= base) return [](std::uint64_t) { return true; };
      const std::uint64_t m = power_u64(p, n.level - base);
      const std::uint64_t c = scaled_residue(n.value, p, base, m);
      return [m, c](std::uint64_t r) { return r % m == c; };
    }
    case SetExpr::Kind::Units:
    case SetExpr::Kind::Sphere: {
      const long idx = n.kind == SetExpr::Kind::Units ? 0 : n.level;
      if (idx < base) return [](std::uint64_t) { return false; };
      const std::uint64_t below = power_u64(p, idx - base);
      const std::uint64_t above = below * p;
      return [below, above](std::uint64_t r) {
        const std::uint64_t t = r % above;
        return t != 0 && t % below == 0;
      };
    }
    case SetExpr::Kind::PrincipalUnits:
      return compile(SetExpr::ball(1, n.level), p, base, level);
    case SetExpr::Kind::Translate: {
      Predicate inner = compile(n.children[0], p, base, level);
      const std::uint64_t t = scaled_residue(n.value, p, base, modulus);
      return [inner = std::move(inner), t, modulus](std::uint64_t r) {
        return inner(r >= t ? r - t : r + (modulus - t));
      };
    }
    case SetExpr::Kind::Union: {
      Predicate a = compile(n.children[0], p, base, level);
      Predicate b = compile(n.children[1], p, base, level);
      return [a = std::move(a), b = std::move(b)](std::uint64_t r) { return a(r) || b(r); };
    }
  }
  return [](std::uint64_t) { return false; };
}

}  // namespace

CompactOpenSet::CompactOpenSet(SetExpr expr, std::uint64_t p) : expr_(std::move(expr)), prime_(p) {
  if (!is_small_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
}

CompactOpenSet CompactOpenSet::parse(std::string_view text, std::uint64_t p) {
  return CompactOpenSet(SetExpr::parse(text), p);
}

long CompactOpenSet::lower_level() const { return lower_level_of(expr_, prime_); }
long CompactOpenSet::resolution() const { return std::max(resolution_of(expr_), lower_level()); }

std::function<bool(std::uint64_t)> CompactOpenSet::ball_predicate(long base, long level) const {
  if (base > lower_level()) throw PreconditionViolation("base level above the set's lower level");
  if (level < resolution()) throw PreconditionViolation("level below the set's resolution");
  return compile(expr_, prime_, base, level);
}

NormalForm CompactOpenSet::normalize() const { return normalize_at(resolution()); }

NormalForm CompactOpenSet::normalize_at(long level) const {
  NormalForm nf;
  nf.prime = prime_;
  nf.lower_level = lower_level();
  nf.resolution = level;
  const std::uint64_t count = power_u64(prime_, level - nf.lower_level);
  if (count > kEnumerationLimit) {
    throw ResolutionTooFine("normal form needs " + std::to_string(count) + " residues");
  }
  const auto pred = ball_predicate(nf.lower_level, level);
  for (std::uint64_t r = 0; r < count; ++r) {
    if (pred(r)) nf.residues.push_back(r);
  }
  return nf;
}

bool CompactOpenSet::contains(const PadicNumber& x) const {
  if (x.prime() != prime_) throw PrimeMismatch("point and set use different primes");
  const long e = lower_level();
  const long m = resolution();
  if (!x.is_zero() && x.valuation() < e) return false;
  const std::uint64_t modulus = power_u64(prime_, m - e);
  std::uint64_t r = 0;
  if (!x.is_zero() && x.valuation() < m) {
    if (x.absolute_precision() < m) {
      throw PrecisionLoss("membership needs digits up to p^" + std::to_string(m));
    }
    const BigInt mod = modulus;
    const BigInt scaled = x.unit() * ipow(BigInt(prime_), static_cast<unsigned>(x.valuation() - e));
    r = static_cast<std::uint64_t>(scaled % mod);
  }
  return ball_predicate(e, m)(r);
}

Rational NormalForm::additive_measure() const {
  return Rational(static_cast<long long>(residues.size())) * rpow(Rational(prime), -resolution);
}

// ---------------------------------------------------------------------------
// Measures

namespace {

Rational one_minus_inverse(std::uint64_t p) { return Rational(p - 1, p); }

// Conversion factor from ADD to `kind` on the sphere p^n Z_p^*.
Rational add_to(MeasureKind kind, std::uint64_t p, long n) {
  switch (kind) {
    case MeasureKind::Add: return 1;
    case MeasureKind::Nu: return 1 / one_minus_inverse(p);
    case MeasureKind::Mult: return 1 / (one_minus_inverse(p) * rpow(Rational(p), -n));
    case MeasureKind::Mu: return Rational(p - 1) / (one_minus_inverse(p) * rpow(Rational(p), -n));
  }
  return 1;
}

bool is_multiplicative(MeasureKind k) { return k == MeasureKind::Mult || k == MeasureKind::Mu; }

long residue_valuation(std::uint64_t r, std::uint64_t p) {
  long v = 0;
  while (r % p == 0) {
    r /= p;
    ++v;
  }
  return v;
}

}  // namespace

Rational measure(const CompactOpenSet& s, MeasureKind kind) {
  const NormalForm nf = s.normalize();
  const std::uint64_t p = nf.prime;
  if (!is_multiplicative(kind)) return nf.additive_measure() * add_to(kind, p, 0);
  // Multiplicative measures split the set into spheres.
  Rational total = 0;
  const Rational ball = rpow(Rational(p), -nf.resolution);
  for (std::uint64_t r : nf.residues) {
    if (r == 0) {
      throw UnboundedSet("set " + s.expr().str() + " contains a neighbourhood of 0; its " +
                         to_string(kind) + " measure diverges");
    }
    total += ball * add_to(kind, p, nf.lower_level + residue_valuation(r, p));
  }
  return total;
}

void require_invariant(const CompactOpenSet& L, NamedSubgroup K) {
  if (K.kind == NamedSubgroup::Kind::Integers) {
    throw PreconditionViolation("K must be Z_p^* or 1 + p^k Z_p");
  }
  const std::uint64_t p = L.prime();
  const long k = K.kind == NamedSubgroup::Kind::Units ? 0 : static_cast<long>(K.level);
  const long e = L.lower_level();
  const long m = L.resolution();
  if (e < 0) throw PreconditionViolation("L must be a subset of Z_p");
  // Orbits in the sphere of valuation n are the balls x + p^(n+k) Z_p (the
  // whole sphere when k = 0); only spheres with n + k < m can split one.
  for (long n = e; n + k < m; ++n) {
    const std::uint64_t width = power_u64(p, m - n);
    if (width > kEnumerationLimit) throw ResolutionTooFine("invariance check too large");
    const auto pred = L.ball_predicate(n, m);
    const std::uint64_t orbit_modulus = k == 0 ? 0 : power_u64(p, k);
    // Group residues of valuation 0 (relative to p^n) by orbit.
    std::vector<int> state(k == 0 ? 1 : orbit_modulus, -1);
    for (std::uint64_t u = 0; u < width; ++u) {
      if (u % p == 0) continue;
      const std::size_t orbit = k == 0 ? 0 : u % orbit_modulus;
      const int in = pred(u) ? 1 : 0;
      if (state[orbit] == -1) {
        state[orbit] = in;
      } else if (state[orbit] != in) {
        throw NotInvariant("K*L != L: the orbit of p^" + std::to_string(n) + "*" +
                           std::to_string(u) + " is split by " + L.expr().str());
      }
    }
  }
}

std::uint64_t coset_count(const CompactOpenSet& L, long n, NamedSubgroup K) {
  if (n < 0) throw PreconditionViolation("sphere index must be >= 0");
  require_invariant(L, K);
  const std::uint64_t p = L.prime();
  const long k = K.kind == NamedSubgroup::Kind::Units ? 0 : static_cast<long>(K.level);
  const long m = L.resolution();
  const long level = std::max(n + k + 1, m);
  const std::uint64_t width = [&] {
    try {
      return power_u64(p, level - n);
    } catch (const ResolutionTooFine&) {
      return kModulusLimit;
    }
  }();
  bool enumerable = width <= kEnumerationLimit;
  if (enumerable) {
    try {
      power_u64(p, level);
    } catch (const ResolutionTooFine&) {
      enumerable = false;
    }
  }
  if (!enumerable) {
    // Past the resolution the sphere is wholly inside or outside L.
    if (n < m) throw ResolutionTooFine("coset enumeration too large");
    const bool inside = L.ball_predicate(0, m)(0);
    if (!inside) return 0;
    return k == 0 ? 1 : (p - 1) * power_u64(p, k - 1);
  }
  const auto pred = L.ball_predicate(0, level);
  const std::uint64_t shift = power_u64(p, n);
  std::uint64_t members = 0;
  for (std::uint64_t u = 1; u < width; ++u) {
    if (u % p == 0) continue;
    if (pred(u * shift)) ++members;
  }
  // Residues mod p^level per orbit.
  const std::uint64_t per_orbit = k == 0 ? (p - 1) * power_u64(p, level - n - 1) : power_u64(p, level - n - k);
  return members / per_orbit;
}

Rational sphere_slice_measure(const CompactOpenSet& L, long n) {
  const long e = L.lower_level();
  const long level = std::max(L.resolution(), n + 1);
  if (n < e) return 0;
  const NormalForm nf = L.normalize_at(level);
  const std::uint64_t p = L.prime();
  const std::uint64_t below = power_u64(p, n - e);
  const std::uint64_t above = below * p;
  std::uint64_t count = 0;
  for (std::uint64_t r : nf.residues) {
    const std::uint64_t t = r % above;
    if (t != 0 && t % below == 0) ++count;
  }
  return Rational(static_cast<long long>(count)) * rpow(Rational(p), -level);
}

Rational coset_count_by_measure(const CompactOpenSet& L, long n, NamedSubgroup K) {
  require_invariant(L, K);
  const std::uint64_t p = L.prime();
  const Rational orbit = K.kind == NamedSubgroup::Kind::Units
                             ? one_minus_inverse(p) * rpow(Rational(p), -n)
                             : rpow(Rational(p), -(n + static_cast<long>(K.level)));
  return sphere_slice_measure(L, n) / orbit;
}

Rational convert(const Rational& value, MeasureKind from, MeasureKind to, const CompactOpenSet& on) {
  if (from == to) return value;
  const std::uint64_t p = on.prime();
  if (is_multiplicative(from) == is_multiplicative(to)) {
    // Both additive, or both multiplicative: a constant factor.
    if (!is_multiplicative(from)) return value * add_to(to, p, 0) / add_to(from, p, 0);
    return value * add_to(to, p, 0) / add_to(from, p, 0);
  }
  const NormalForm nf = on.normalize();
  long sphere = std::numeric_limits<long>::min();
  for (std::uint64_t r : nf.residues) {
    if (r == 0) throw MixedSphere("set meets every sphere near 0");
    const long v = nf.lower_level + residue_valuation(r, p);
    if (sphere == std::numeric_limits<long>::min()) {
      sphere = v;
    } else if (sphere != v) {
      throw MixedSphere("set " + on.expr().str() + " spans spheres " + std::to_string(sphere) +
                        " and " + std::to_string(v));
    }
  }
  if (sphere == std::numeric_limits<long>::min()) return value;  // empty set
  return value * add_to(to, p, sphere) / add_to(from, p, sphere);
}

}  // namespace qgt
