#pragma once

// Eigenvalue lists: the spectrum, with multiplicities, of the density
// matrix of a state on a type I factor.
//
// A list is a finite head plus an optional geometric tail. The tail is a
// ratio r in (0, 1) and seeds a_1 > ... > a_k with multiplicities; it
// contributes a_j r^n for every n >= 0. In canonical form the seeds lie in
// (r A, A] for A = a_1, every head value exceeds A, head values strictly
// decrease, and the tail starts as early as the data allows. Truncated
// lists (from tail x tail products) carry the missing mass as `residual`.

#include "qgt/haar.hpp"
#include "qgt/real.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qgt {

struct Eigenvalue {
  Real value;
  std::uint64_t multiplicity = 1;
};

struct GeometricTail {
  Real ratio;
  std::vector<Eigenvalue> seeds;
};

class EigenvalueList {
 public:
  EigenvalueList() : EigenvalueList({{Real(1), 1}}) {}
  explicit EigenvalueList(std::vector<Eigenvalue> head, std::optional<GeometricTail> tail = std::nullopt,
                          Real residual = Real(0));

  static EigenvalueList point_mass() { return EigenvalueList(); }
  static EigenvalueList uniform(std::uint64_t k);
  // {1/(1+lambda), lambda/(1+lambda)}, 0 < lambda <= 1.
  static EigenvalueList powers(const Rational& lambda);
  // p^(-n beta) (1 - p^(-beta)), n >= 0; 0 < beta <= 1. Exact for beta = 1.
  static EigenvalueList boca(std::uint64_t p, const Rational& beta);

  // Closed forms of the three corners e(K, L) used for the ax+b group.
  // (Z_p^*, Z_p): (1 - 1/p) p^-n, multiplicity 1.
  static EigenvalueList units_corner(std::uint64_t p);
  // (1 + pZ_p, Z_p^* - 1): 1/(p-1) with multiplicity p-2, then
  // p^-n/(p-1) with multiplicity p-1 for n >= 1.
  static EigenvalueList dual_corner(std::uint64_t p);
  // (1 + pZ_p, Z_p): p^-(n+1) with multiplicity p-1.
  static EigenvalueList selfdual_corner(std::uint64_t p);

  const std::vector<Eigenvalue>& head() const { return head_; }
  const std::optional<GeometricTail>& tail() const { return tail_; }
  const Real& residual() const { return residual_; }

  bool is_exact() const;
  bool is_finite() const { return !tail_; }
  bool is_truncated() const;
  Real mass() const;
  // Exactly 1, or (approximate values) an error interval containing 1.
  bool mass_is_one() const;

  const Eigenvalue& top() const;
  // The first n distinct values, largest first.
  std::vector<Eigenvalue> levels(std::size_t n) const;
  // Total number of distinct values; nullopt when infinite.
  std::optional<std::size_t> level_count() const;
  // The top m levels renormalized to mass 1 (a corner by the projection on
  // the top m eigenspaces).
  EigenvalueList top_levels(std::size_t m) const;
  Real mass_of_top_levels(std::size_t m) const;

  std::string str(std::size_t max_levels = 8) const;

  friend bool operator==(const EigenvalueList& a, const EigenvalueList& b);

 private:
  void canonicalize();

  std::vector<Eigenvalue> head_;
  std::optional<GeometricTail> tail_;
  Real residual_;
};

// Values (mu+(K)/mu+(L)) p^-n with multiplicity |(L ∩ p^n Z_p^*)/K|.
// Requires mu(K) = 1, nu(L) = 1, K in {Z_p^*, 1 + p^k Z_p}, L in Z_p, KL = L.
EigenvalueList corner_list(const CompactOpenSet& K, const CompactOpenSet& L, MeasureKind mu, MeasureKind nu);

// Pairwise products. When both lists have geometric tails the product is
// not geometric; the result keeps the top `max_levels` values and records
// the rest as residual mass.
EigenvalueList tensor(const EigenvalueList& a, const EigenvalueList& b, std::size_t max_levels = 64);
// As tensor, but raises TailBlowup instead of truncating.
EigenvalueList tensor_exact(const EigenvalueList& a, const EigenvalueList& b);

// Removes `copy` (a sub-multiset of `list`, e.g. one copy of a geometric
// sequence; its mass need not be 1) and renormalizes. Raises
// PreconditionViolation when `copy` is not contained in the list.
EigenvalueList remove_sublist(const EigenvalueList& list, const EigenvalueList& copy);

nlohmann::json to_json(const EigenvalueList& list, std::size_t max_levels = 16);
// One row per level: level,value,multiplicity.
std::string to_csv(const EigenvalueList& list, std::size_t max_levels);

}  // namespace qgt
