#pragma once

// Primes and prime subsets described by an explicit finite list plus a
// symbolic tail family, so that series over the subset keep a definite
// convergence verdict.

#include "qgt/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qgt {

bool is_prime(std::uint64_t n);
// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);
// All primes <= limit.
std::vector<std::uint64_t> sieve(std::uint64_t limit);

enum class TailFamily {
  None,
  AllPrimes,
  ArithProg,  // primes ≡ a (mod m)
  Growth,     // nextprime(ceil(n^g)), n = 1, 2, ...; duplicates dropped
  Paired,     // p ≡ 1 (mod 4), p >= p_min, each with a partner q ≡ 3 (mod 4)
};

class PrimeSubset {
 public:
  PrimeSubset() = default;

  static PrimeSubset explicit_only(std::vector<std::uint64_t> primes);
  static PrimeSubset all_primes();
  static PrimeSubset arith_prog(std::uint64_t a, std::uint64_t m);
  static PrimeSubset growth(const Rational& exponent);
  // lambda in (0, 1]: partner q is the smallest unused prime ≡ 3 (mod 4)
  // with q >= p / lambda. lambda = 0: q >= p^(17/12), an exponent
  // whose first coincidence p^17 ~ q^12 lies beyond the levels compared.
  static PrimeSubset paired(const Rational& lambda, std::uint64_t p_min);

  // Adds explicit primes ahead of the tail; tail members count only above
  // the largest explicit prime.
  PrimeSubset with_explicit(std::vector<std::uint64_t> primes) const;

  // all_primes | growth(2) | arith_prog(1,4) | paired(1/2,100000)
  // | explicit(2,3,5) | explicit(2,3)+all_primes
  static PrimeSubset parse(std::string_view text);
  std::string str() const;
  // The tail family alone ("none" when finite).
  std::string tail_str() const;

  const std::vector<std::uint64_t>& explicit_primes() const { return explicit_; }
  TailFamily tail() const { return tail_; }
  std::uint64_t progression_residue() const { return a_; }
  std::uint64_t progression_modulus() const { return m_; }
  const Rational& growth_exponent() const { return growth_; }
  const Rational& pairing_ratio() const { return lambda_; }
  std::uint64_t pairing_start() const { return p_min_; }

  bool is_finite() const { return tail_ == TailFamily::None; }
  // Tail members are primes > tail_floor().
  std::uint64_t tail_floor() const { return explicit_.empty() ? 0 : explicit_.back(); }

  // The first n members in increasing order (fewer if the subset is finite).
  std::vector<std::uint64_t> first(std::size_t n) const;
  // The members grouped into consecutive tensor blocks: declared pairs for
  // the paired family, consecutive pairs of members otherwise.
  std::vector<std::vector<std::uint64_t>> blocks(std::size_t count) const;

  friend bool operator==(const PrimeSubset&, const PrimeSubset&) = default;

 private:
  std::vector<std::uint64_t> explicit_;
  TailFamily tail_ = TailFamily::None;
  std::uint64_t a_ = 0;
  std::uint64_t m_ = 1;
  Rational growth_ = 0;
  Rational lambda_ = 0;
  std::uint64_t p_min_ = 2;
};

}  // namespace qgt
