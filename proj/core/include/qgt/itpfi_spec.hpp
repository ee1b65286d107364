#pragma once

// ITPFI data: a prime subset and a rule producing one eigenvalue list per
// prime. Besides exact and numeric list generation, each built-in rule
// knows two-sided bounds for the per-prime quantities the classifier sums
// (1 - top eigenvalue, mass off the top value), expressed as series atoms.

#include "qgt/eigenlist.hpp"
#include "qgt/haar.hpp"
#include "qgt/primes.hpp"
#include "qgt/series.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qgt {

struct ListRule {
  enum class Kind { Corner, Boca, Powers, Uniform, Tensor, TopLevels };
  enum class CornerKind { Units, Dual, SelfDual, Generic };

  Kind kind = Kind::Uniform;
  CornerKind corner = CornerKind::Generic;
  std::string K;
  std::string L;
  MeasureKind mu = MeasureKind::Mult;
  MeasureKind nu = MeasureKind::Add;
  Rational beta = 1;    // Boca
  Rational lambda = 1;  // Powers
  long slope = 0;       // Uniform: k(p) = max(1, slope * p + offset)
  long offset = 1;
  std::vector<ListRule> factors;  // Tensor factors; TopLevels base
  std::size_t levels = 0;         // TopLevels

  // Recognizes the three named corners by their canonical set text.
  static ListRule corner_rule(const std::string& K, const std::string& L, MeasureKind mu, MeasureKind nu);
  static ListRule units_corner();     // (Z_p^*, Z_p, MULT, ADD)
  static ListRule dual_corner();      // (1 + pZ_p, Z_p^* - 1, MU, NU)
  static ListRule selfdual_corner();  // (1 + pZ_p, Z_p, MU, ADD)
  static ListRule boca(const Rational& beta);
  static ListRule powers(const Rational& lambda);
  static ListRule uniform(long k) { return uniform_affine(0, k); }
  static ListRule uniform_affine(long slope, long offset);
  static ListRule tensor(std::vector<ListRule> factors);
  static ListRule top_levels(const ListRule& base, std::size_t m);

  std::uint64_t uniform_size(std::uint64_t p) const;
  bool prime_independent() const;
  std::string str() const;
  friend bool operator==(const ListRule& a, const ListRule& b) { return a.str() == b.str(); }
};

// Bounds valid for every prime p >= p0 of the subset (lower bounds may
// hold only for all large p).
struct RuleAsymptotics {
  bool escapes = false;  // no bounds in the series grammar
  std::vector<SeriesAtom> one_minus_top_lower;
  std::vector<SeriesAtom> one_minus_top_upper;
  std::vector<SeriesAtom> off_top_lower;  // mass of the entries below the top value
  std::vector<SeriesAtom> off_top_upper;
  double gap_lower = 0;  // top / second value; infinite for single-valued lists
  double top_lower = 0;  // infimum of the top eigenvalue
};

RuleAsymptotics asymptotics(const ListRule& rule, std::uint64_t p0);

EigenvalueList exact_list(const ListRule& rule, std::uint64_t p, std::size_t max_levels = 64);

// The first `levels` distinct values (largest first) with multiplicities,
// in double precision.
using NumericLevels = std::vector<std::pair<double, double>>;
void numeric_levels(const ListRule& rule, std::uint64_t p, std::size_t levels, NumericLevels& out);

struct Truncation {
  std::size_t primes = 1000;
  std::size_t levels = 64;
};

struct Certificate {
  std::string step;
  Verdict verdict;
};

struct ITPFISpec {
  PrimeSubset subset;
  ListRule rule;
  Truncation truncation;
  // Set for corners of crossed products by infinite groups, whose factors
  // are purely infinite: forces the _INF variants of types I and II.
  bool amplified = false;
  std::vector<Certificate> certificates;

  EigenvalueList list_at(std::uint64_t p) const { return exact_list(rule, p, truncation.levels); }
  std::uint64_t smallest_prime() const;
  PrimeSeries series(std::vector<SeriesAtom> atoms) const { return {std::move(atoms), subset}; }
};

// Mass removed from each list by keeping only its top m levels.
Comparison removed_mass(const ITPFISpec& spec, std::size_t m);

// Corner by the projection onto the top m eigenspaces of every list.
// Nonzero iff the removed masses are summable; raises NullProjection when
// they diverge and IndeterminateInput when the series verdict is unknown.
ITPFISpec corner_reduce(const ITPFISpec& spec, std::size_t m);

enum class CopyKind {
  GeometricSequence,  // one copy of p^-n / (p-1), n >= 1, from the dual corner
  TopLevel,           // the whole top eigenspace
};

// Removes a summable sub-block from every list without changing the
// isomorphism class; the enabling verdict is recorded as a certificate.
// Rules with nothing of the requested kind are returned unchanged.
ITPFISpec remove_summable_copies(const ITPFISpec& spec, CopyKind kind = CopyKind::GeometricSequence);

nlohmann::json to_json(const ListRule& rule);
ListRule rule_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ITPFISpec& spec);
ITPFISpec spec_from_json(const nlohmann::json& j);

}  // namespace qgt
