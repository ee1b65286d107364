#pragma once

// Convergence verdicts for series indexed by a prime subset.
//
// A term is a finite sum of atoms c * p^(-s) * prod (1 - p^(-u))^k with
// c >= 0, u > 0. Each factor is bounded above and below by constants once
// p >= 2, so an atom is comparable to c * p^(-s) and the verdict depends
// only on the smallest exponent s* and on the tail family of the subset.
// Verdicts come from symbolic rules; partial sums only fill in UNKNOWN.

#include "qgt/primes.hpp"
#include "qgt/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qgt {

struct SeriesFactor {
  Rational u;  // (1 - p^(-u))^k
  long k = 0;
  friend bool operator==(const SeriesFactor&, const SeriesFactor&) = default;
};

struct SeriesAtom {
  Rational coeff = 1;
  Rational exponent = 0;
  std::vector<SeriesFactor> factors;

  static SeriesAtom power(const Rational& coeff, const Rational& exponent);
  // Closed form of sum_{i >= i0} coeff * p^(-s) * factors * p^(-r i).
  static SeriesAtom geometric(const Rational& coeff, const Rational& exponent,
                              std::vector<SeriesFactor> factors, const Rational& r, long i0);

  long double evaluate(std::uint64_t p) const;
  friend bool operator==(const SeriesAtom&, const SeriesAtom&) = default;
};

struct PrimeSeries {
  std::vector<SeriesAtom> atoms;
  PrimeSubset subset;

  long double term(std::uint64_t p) const;
  std::string str() const;
};

enum class VerdictKind { Converges, Diverges, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string rule;
  Rational bound = 0;             // CONVERGES: the series is <= bound
  long double partial_sum = 0;    // UNKNOWN: evidence
  std::uint64_t threshold = 0;    // number of primes in the partial sum

  bool converges() const { return kind == VerdictKind::Converges; }
  bool diverges() const { return kind == VerdictKind::Diverges; }
  bool unknown() const { return kind == VerdictKind::Unknown; }
};

std::string to_string(VerdictKind kind);

// Two-sided comparison: lower <= const * term for all large p, and
// term <= upper for every p.
struct Comparison {
  PrimeSeries lower;
  PrimeSeries upper;
};

Verdict decide(const PrimeSeries& series);
Verdict decide(const Comparison& comparison);

// Sum of the first `count` terms in increasing prime order.
long double partial_sum(const PrimeSeries& series, std::size_t count);

nlohmann::json to_json(const PrimeSubset& subset);
PrimeSubset subset_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PrimeSeries& series);
PrimeSeries series_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Verdict& verdict);

}  // namespace qgt
