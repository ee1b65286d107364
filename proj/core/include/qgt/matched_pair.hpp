#pragma once

// The ax+b group over finitely supported adeles and its matched pair
// G1 = {(g, 0)}, G2 = {(s, (1 - s)/p)}.
//
// For g in G1 and s in G2 the product splits as g s = alpha_g(s) beta_s(g):
//   alpha_g(s) = g (s - 1) + 1,   beta_s(g) = g s / (g (s - 1) + 1).
// Both are undefined on the single point g (s - 1) + 1 = 0, which raises
// SingularPair. Orientation (checked in the tests):
//   alpha_g(s t)  = alpha_g(s) alpha_{beta_s(g)}(t)
//   beta_{s t}(g) = beta_t(beta_s(g))
//   beta_s(g h)   = beta_{alpha_h(s)}(g) beta_s(h)

#include "qgt/errors.hpp"
#include "qgt/padic.hpp"
#include "qgt/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace qgt {

// Per-prime field operations shared by exact rationals and p-adic numbers.
template <class V>
struct LocalField;

template <>
struct LocalField<Rational> {
  static Rational constant(long n, std::uint64_t, const Rational&) { return n; }
  static Rational prime(std::uint64_t p, const Rational&) { return Rational(p); }
  static bool is_zero(const Rational& x) { return x == 0; }
};

template <>
struct LocalField<PadicNumber> {
  static PadicNumber constant(long n, std::uint64_t p, const PadicNumber& like) {
    return PadicNumber::from_rational(Rational(n), p, {std::max(like.precision(), 1u)});
  }
  static PadicNumber prime(std::uint64_t p, const PadicNumber& like) { return constant(static_cast<long>(p), p, like); }
  static bool is_zero(const PadicNumber& x) { return x.is_zero(); }
};

template <class V>
struct AxbPair {
  V a;
  V b;
};

namespace local {

template <class V>
V alpha(const V& g, const V& s, std::uint64_t p) {
  const V one = LocalField<V>::constant(1, p, s);
  V r = g * (s - one) + one;
  if (LocalField<V>::is_zero(r)) throw SingularPair("g(s-1)+1 = 0 at p=" + std::to_string(p));
  return r;
}

template <class V>
V beta(const V& s, const V& g, std::uint64_t p) {
  return g * s / alpha(g, s, p);
}

template <class V>
AxbPair<V> mul(const AxbPair<V>& x, const AxbPair<V>& y) {
  return {x.a * y.a, x.a * y.b + x.b};
}

template <class V>
AxbPair<V> g1(const V& g, std::uint64_t p) {
  return {g, LocalField<V>::constant(0, p, g)};
}

template <class V>
AxbPair<V> g2(const V& s, std::uint64_t p) {
  if (LocalField<V>::is_zero(s)) throw PreconditionViolation("G2 component must be nonzero");
  return {s, (LocalField<V>::constant(1, p, s) - s) / LocalField<V>::prime(p, s)};
}

// (a, b) = g2(s) g1(h) with s = 1 - p b, h = a / s.
template <class V>
std::pair<V, V> factorize(const AxbPair<V>& x, std::uint64_t p) {
  const V s = LocalField<V>::constant(1, p, x.b) - LocalField<V>::prime(p, x.b) * x.b;
  if (LocalField<V>::is_zero(s)) throw NullSetElement("b = 1/p at p=" + std::to_string(p));
  return {s, x.a / s};
}

template <class V>
bool equal(const AxbPair<V>& x, const AxbPair<V>& y) {
  return x.a == y.a && x.b == y.b;
}

template <class V>
bool reconstruct_check(const V& g, const V& s, std::uint64_t p) {
  const AxbPair<V> lhs = mul(g1(g, p), g2(s, p));
  const AxbPair<V> rhs = mul(g2(alpha(g, s, p), p), g1(beta(s, g, p), p));
  return equal(lhs, rhs);
}

// (beta_s(g))^-1 == alpha_{s^-1}(g^-1): u(a) = a^-1 carries G1 onto G2 and
// interchanges the two actions.
template <class V>
bool selfdual_check(const V& s, const V& g, std::uint64_t p) {
  const V one = LocalField<V>::constant(1, p, s);
  return one / beta(s, g, p) == alpha(one / s, one / g, p);
}

template <class V>
bool alpha_action_law(const V& g, const V& h, const V& s, std::uint64_t p) {
  return alpha(g * h, s, p) == alpha(g, alpha(h, s, p), p);
}

template <class V>
bool alpha_cocycle_law(const V& g, const V& s, const V& t, std::uint64_t p) {
  return alpha(g, s * t, p) == alpha(g, s, p) * alpha(beta(s, g, p), t, p);
}

template <class V>
bool beta_action_law(const V& s, const V& t, const V& g, std::uint64_t p) {
  return beta(s * t, g, p) == beta(t, beta(s, g, p), p);
}

template <class V>
bool beta_cocycle_law(const V& s, const V& g, const V& h, std::uint64_t p) {
  return beta(s, g * h, p) == beta(alpha(h, s, p), g, p) * beta(s, h, p);
}

template <class V>
bool factorize_round_trip(const AxbPair<V>& x, std::uint64_t p) {
  const auto [s, h] = factorize(x, p);
  return equal(mul(g2(s, p), g1(h, p)), x);
}

}  // namespace local

struct SampleReport {
  std::uint64_t prime = 2;
  std::size_t samples = 0;
  std::size_t singular = 0;  // rejected as singular or null-set elements
  std::map<std::string, std::size_t> failures;  // law -> failing samples

  bool passed() const { return failures.empty(); }
};

// Draws `samples` tuples g, h in Q_p^*, s, t in Q_p^* (valuations in
// [-2, 2], Haar-random unit digits) and (a, b) in the ax+b group, and checks
// every identity above on each.
SampleReport verify_samples(std::uint64_t p, std::size_t samples, std::uint64_t seed,
                            PrecisionContext ctx = {});

// Finitely supported families; a missing prime means the identity
// component (1 for units, (1, 0) for the ax+b group).
struct UnitFamily {
  std::map<std::uint64_t, Rational> values;

  static UnitFamily at_prime(std::uint64_t p, const Rational& v) { return {{{p, v}}}; }
  Rational at(std::uint64_t p) const;
};

struct G2Element {
  std::map<std::uint64_t, Rational> values;

  static G2Element at_prime(std::uint64_t p, const Rational& s) { return {{{p, s}}}; }
  Rational at(std::uint64_t p) const;
};

struct AxbElement {
  std::map<std::uint64_t, AxbPair<Rational>> values;

  static AxbElement at_prime(std::uint64_t p, const Rational& a, const Rational& b);
  AxbPair<Rational> at(std::uint64_t p) const;
  friend AxbElement operator*(const AxbElement& x, const AxbElement& y);
  friend bool operator==(const AxbElement& x, const AxbElement& y);
};

AxbElement as_axb(const UnitFamily& g);
AxbElement as_axb(const G2Element& s);

G2Element alpha(const UnitFamily& g, const G2Element& s);
UnitFamily beta(const G2Element& s, const UnitFamily& g);
bool reconstruct_check(const UnitFamily& g, const G2Element& s);
std::pair<G2Element, UnitFamily> factorize(const AxbElement& x);
// prod_p 1 / |x_p|_p.
Rational delta(const UnitFamily& x);
G2Element selfdual_u(const UnitFamily& g);
bool selfdual_check(const G2Element& s, const UnitFamily& g);

// {"primes": {"3": {"a": "8", "b": "-2"}}, "tail": "integral"}
nlohmann::json to_json(const AxbElement& x);
AxbElement axb_from_json(const nlohmann::json& j);

}  // namespace qgt
