#pragma once

// The quantum group of the ax+b matched pair over a set S of primes: its
// von Neumann algebra M_S and dual M^_S are corners of crossed products
// whose ITPFI eigenvalue lists come from the corner rules below.

#include "qgt/classifier.hpp"
#include "qgt/itpfi_spec.hpp"
#include "qgt/primes.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qgt {

// Corner lists of (Z_p^*, Z_p), (1 + pZ_p, Z_p^* - 1) and (1 + pZ_p, Z_p);
// all three carry the amplification flag.
ITPFISpec ms_spec(const PrimeSubset& s, Truncation truncation = {});
ITPFISpec ms_dual_spec(const PrimeSubset& s, Truncation truncation = {});
ITPFISpec ls_spec(const PrimeSubset& s, Truncation truncation = {});

struct QuantumGroupReport {
  PrimeSubset subset;
  Classification m;
  Classification m_dual;
  bool dual_matches_tensor = false;  // m_dual type = m type tensor II_1
  bool dual_lists_match = false;     // dual lists minus one copy = units lists tensor UNIFORM(p-2)
  bool selfdual_lists_match = false; // ls lists = boca(1) tensor UNIFORM(p-1)
  bool selfdual_identity = false;    // (beta_s(g))^-1 = alpha_{s^-1}(g^-1) on samples
  Verdict inverse_prime_sum;         // sum over S of 1/p
  // "non_units_null" (mu(A_S - A_S^*) = 0) or "units_null" (mu(A_S^*) = 0).
  std::string measure_dichotomy;
  long double units_product = 1;     // prod (1 - 1/p) over the first members
  bool heuristic = false;            // III subtype comes from the ratio estimator

  bool consistent() const {
    return dual_matches_tensor && dual_lists_match && selfdual_lists_match && selfdual_identity;
  }
};

QuantumGroupReport classify_pair(const PrimeSubset& s, const ClassifierParams& params = {},
                                 Truncation truncation = {});

struct NullComplement {
  Rational value;  // always 0
  std::string witness;
  // Additive measure of the ball of radius p^-k around 1/p in Q_p, for
  // the per-prime slice {b_p = 1/p}; it tends to 0 with k.
  std::vector<std::pair<std::uint64_t, Rational>> slice_bounds;
};

NullComplement null_complement_check(const PrimeSubset& s, long depth = 20);

struct SearchResult {
  PrimeSubset subset;
  QuantumGroupReport report;
  std::size_t candidates = 0;
};

// Greedy walk over candidate subsets: all primes for lambda = 1, paired
// primes q ~ p / lambda (q ~ p ln p for lambda = 0) with growing start
// otherwise. Raises BudgetExhausted when no candidate within `budget`
// reaches the target within params.epsilon / 2.
SearchResult search_lambda(double lambda, const ClassifierParams& params = {}, std::size_t budget = 8,
                           Truncation truncation = {});

nlohmann::json to_json(const QuantumGroupReport& report);
nlohmann::json to_json(const NullComplement& check);
nlohmann::json to_json(const SearchResult& result);

}  // namespace qgt
