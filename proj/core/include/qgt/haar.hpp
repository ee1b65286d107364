#pragma once

// Exact Haar measures on compact open subsets of Q_p.
//
// Sets are symbolic (balls, spheres p^n Z_p^*, the unit group, 1 + p^k Z_p,
// translates and unions). Every set is a finite union of balls
// c + p^m Z_p at some resolution m and lies inside p^e Z_p for some lower
// level e, so its normal form is the sorted list of residues of
// p^e Z_p / p^m Z_p it covers. All measures are exact rationals.

#include "qgt/padic.hpp"
#include "qgt/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qgt {

// ADD: mu_p^+ with Z_p -> 1.  MULT: mu_p^x with Z_p^* -> 1.
// MU: mu_p with 1 + pZ_p -> 1 (= (p-1) mu_p^x).  NU: nu_p with Z_p^* -> 1.
enum class MeasureKind { Add, Mult, Mu, Nu };

std::string to_string(MeasureKind kind);
MeasureKind parse_measure_kind(std::string_view text);

class SetExpr {
 public:
  enum class Kind { Ball, Sphere, Units, PrincipalUnits, Translate, Union };

  static SetExpr ball(const Rational& center, long level);
  static SetExpr sphere(long n);
  static SetExpr units();
  static SetExpr principal_units(unsigned level = 1);
  static SetExpr translate(const SetExpr& base, const Rational& shift);
  static SetExpr unite(const SetExpr& a, const SetExpr& b);

  // ball(c, k) | sphere(n) | units | one_plus_p | one_plus_p(k)
  // | translate(S, t) | union(S1, S2)
  static SetExpr parse(std::string_view text);
  std::string str() const;

  Kind kind() const;
  friend bool operator==(const SetExpr& a, const SetExpr& b) { return a.str() == b.str(); }

  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct SetExpr::Node {
  Kind kind;
  Rational value;  // ball center or translation
  long level = 0;  // ball level, sphere index, principal-unit level
  std::vector<SetExpr> children;
};

struct NormalForm {
  std::uint64_t prime = 2;
  long lower_level = 0;  // set lies in p^e Z_p
  long resolution = 0;   // union of balls c + p^m Z_p
  std::vector<std::uint64_t> residues;  // of p^e Z_p / p^m Z_p, sorted

  Rational additive_measure() const;
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

class CompactOpenSet {
 public:
  CompactOpenSet(SetExpr expr, std::uint64_t p);
  static CompactOpenSet parse(std::string_view text, std::uint64_t p);

  const SetExpr& expr() const { return expr_; }
  std::uint64_t prime() const { return prime_; }
  long lower_level() const;
  long resolution() const;

  NormalForm normalize() const;
  // Normal form at a finer resolution (level >= resolution()).
  NormalForm normalize_at(long level) const;
  bool contains(const PadicNumber& x) const;

  // Membership of the ball (p^base * r) + p^level Z_p for residues r of
  // p^base Z_p / p^level Z_p; base <= lower_level(), level >= resolution().
  std::function<bool(std::uint64_t)> ball_predicate(long base, long level) const;

 private:
  SetExpr expr_;
  std::uint64_t prime_;
};

Rational measure(const CompactOpenSet& s, MeasureKind kind);

// Number of K-orbits in L ∩ p^n Z_p^*, by enumerating residues of valuation
// n modulo p^(n+k+1) (k = level of K; k = 0 for Z_p^*). Verifies KL = L first.
std::uint64_t coset_count(const CompactOpenSet& L, long n, NamedSubgroup K);
// Same count obtained as measure(L ∩ p^n Z_p^*, ADD) / measure(one orbit, ADD).
Rational coset_count_by_measure(const CompactOpenSet& L, long n, NamedSubgroup K);
// Throws NotInvariant unless K * L == L.
void require_invariant(const CompactOpenSet& L, NamedSubgroup K);
// μ+(L ∩ p^n Z_p^*).
Rational sphere_slice_measure(const CompactOpenSet& L, long n);

// Applies d mu^+ = (1 - 1/p) |x|_p d mu^x and the MU / NU normalizations.
// Crossing between additive (ADD, NU) and multiplicative (MULT, MU) kinds
// requires the set to lie in a single sphere.
Rational convert(const Rational& value, MeasureKind from, MeasureKind to, const CompactOpenSet& on);

}  // namespace qgt
