#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library: residues are enumerated directly, series terms use closed
// forms in double precision, primes come from trial division.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

inline std::uint64_t upow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    if (trial_prime(n)) out.push_back(n);
  }
  return out;
}

// Membership of a residue x mod p^m in L, decided from x alone.
using ResiduePredicate = std::function<bool(std::uint64_t x, std::uint64_t modulus)>;

inline ResiduePredicate integers() {
  return [](std::uint64_t, std::uint64_t) { return true; };
}
// Z_p^* - 1: x + 1 is a unit.
inline ResiduePredicate units_minus_one(std::uint64_t p) {
  return [p](std::uint64_t x, std::uint64_t modulus) { return (x + 1) % modulus % p != 0; };
}

// K = Z_p^* (level 0) or 1 + p^level Z_p, as residues mod p^m.
inline std::vector<std::uint64_t> group_residues(std::uint64_t p, unsigned level, unsigned m) {
  const std::uint64_t modulus = upow(p, m);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < modulus; ++k) {
    if (level == 0 ? k % p != 0 : k % upow(p, level) == 1 % upow(p, level)) out.push_back(k);
  }
  return out;
}

// Number of K-orbits among residues x mod p^(n+2) of valuation exactly n
// lying in L. Orbits are found by closing each residue under
// multiplication by K.
inline std::uint64_t orbit_count(std::uint64_t p, unsigned n, unsigned k_level, const ResiduePredicate& in_l) {
  const unsigned m = n + 2;
  const std::uint64_t modulus = upow(p, m);
  const std::uint64_t pn = upow(p, n);
  const auto group = group_residues(p, k_level, 2);
  std::set<std::uint64_t> seen;
  std::uint64_t orbits = 0;
  // x = p^n u with u a unit mod p^2 covers every residue of valuation n.
  for (std::uint64_t u = 1; u < p * p; ++u) {
    if (u % p == 0) continue;
    const std::uint64_t x = pn * u % modulus;
    if (!in_l(x, modulus) || seen.count(x)) continue;
    ++orbits;
    for (std::uint64_t k : group) seen.insert(pn * (u * k % (p * p)) % modulus);
  }
  return orbits;
}

// Additive Haar measure of a set given by residues mod p^m.
inline double residue_measure(std::uint64_t p, unsigned m, const ResiduePredicate& in_set) {
  const std::uint64_t modulus = upow(p, m);
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < modulus; ++x) {
    if (in_set(x, modulus)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(modulus);
}

// Geometric list value p^(-n beta) (1 - p^(-beta)).
inline double boca_value(std::uint64_t p, double beta, unsigned n) {
  const double r = std::pow(static_cast<double>(p), -beta);
  return std::pow(r, n) * (1 - r);
}

// 1 - |sum_i m_i lambda_i^(1+it)| by direct complex evaluation.
inline double t_term(const std::vector<std::pair<double, double>>& list, double t) {
  std::complex<double> s = 0;
  for (const auto& [value, mult] : list) s += mult * value * std::exp(std::complex<double>(0, t * std::log(value)));
  return 1 - std::abs(s);
}

// x mod m for a rational a/b with gcd(b, p) = 1, via brute-force inverse.
inline std::uint64_t rational_residue(long long a, long long b, std::uint64_t modulus) {
  const auto mm = static_cast<long long>(modulus);
  const long long ar = ((a % mm) + mm) % mm;
  const long long br = ((b % mm) + mm) % mm;
  for (long long inv = 1; inv < mm; ++inv) {
    if (static_cast<long long>(br) * inv % mm == 1) return static_cast<std::uint64_t>(static_cast<long long>(ar) * inv % mm);
  }
  return 0;
}

}  // namespace oracle
