#include "qgt/bicrossed.hpp"

#include "qgt/errors.hpp"
#include "qgt/haar.hpp"
#include "qgt/matched_pair.hpp"

#include <cmath>

namespace qgt {

namespace {

constexpr std::size_t kListChecks = 6;
constexpr std::size_t kProductPrimes = 100;

ITPFISpec amplified_spec(const PrimeSubset& s, ListRule rule, Truncation truncation) {
  ITPFISpec spec;
  spec.subset = s;
  spec.rule = std::move(rule);
  spec.truncation = truncation;
  spec.amplified = true;
  return spec;
}

std::vector<std::uint64_t> check_primes(const PrimeSubset& s) {
  auto primes = s.first(kListChecks);
  if (primes.empty()) primes = {2, 3, 5};
  return primes;
}

bool dual_lists_match(const PrimeSubset& s) {
  for (std::uint64_t p : check_primes(s)) {
    const auto dual = EigenvalueList::dual_corner(p);
    const auto expected = tensor_exact(EigenvalueList::units_corner(p), EigenvalueList::uniform(std::max<std::uint64_t>(1, p - 2)));
    // At p = 2 the copy is the whole list, which already has the target form.
    if (p == 2) {
      if (!(dual == expected)) return false;
      continue;
    }
    // One copy of p^-n / (p - 1), n >= 1.
    const Real first = Rational(1, static_cast<long long>(p * (p - 1)));
    const EigenvalueList copy({}, GeometricTail{Real(Rational(1, static_cast<long long>(p))), {{first, 1}}});
    if (!(remove_sublist(dual, copy) == expected)) return false;
  }
  return true;
}

bool selfdual_lists_match(const PrimeSubset& s) {
  for (std::uint64_t p : check_primes(s)) {
    const auto expected = tensor_exact(EigenvalueList::boca(p, 1), EigenvalueList::uniform(p - 1));
    if (!(EigenvalueList::selfdual_corner(p) == expected)) return false;
  }
  return true;
}

bool selfdual_identity(const PrimeSubset& s) {
  for (std::uint64_t p : check_primes(s)) {
    const Rational pr(static_cast<long long>(p));
    for (long j = 1; j <= 4; ++j) {
      const Rational sv = 1 + pr * j;
      const Rational g = Rational(j + 1, 1 + pr * j);
      if (valuation(g, p) != 0) continue;
      if (!local::selfdual_check(sv, g, p)) return false;
    }
  }
  return true;
}

}  // namespace

ITPFISpec ms_spec(const PrimeSubset& s, Truncation truncation) {
  return amplified_spec(s, ListRule::units_corner(), truncation);
}

ITPFISpec ms_dual_spec(const PrimeSubset& s, Truncation truncation) {
  return amplified_spec(s, ListRule::dual_corner(), truncation);
}

ITPFISpec ls_spec(const PrimeSubset& s, Truncation truncation) {
  return amplified_spec(s, ListRule::selfdual_corner(), truncation);
}

QuantumGroupReport classify_pair(const PrimeSubset& s, const ClassifierParams& params, Truncation truncation) {
  QuantumGroupReport r;
  r.subset = s;
  r.m = classify(ms_spec(s, truncation), params);
  r.m_dual = classify(ms_dual_spec(s, truncation), params);
  if (r.m.type.determinate() && r.m_dual.type.determinate()) {
    r.dual_matches_tensor = r.m_dual.type == tensor_type(r.m.type, FactorType::ii_1());
  }
  r.dual_lists_match = dual_lists_match(s);
  r.selfdual_lists_match = selfdual_lists_match(s);
  r.selfdual_identity = selfdual_identity(s);

  r.inverse_prime_sum = decide(PrimeSeries{{SeriesAtom::power(1, 1)}, s});
  if (r.inverse_prime_sum.converges()) {
    r.measure_dichotomy = "non_units_null";
  } else if (r.inverse_prime_sum.diverges()) {
    r.measure_dichotomy = "units_null";
  } else {
    r.measure_dichotomy = "unknown";
  }
  // mu+(Z_p^*) = 1 - 1/p, computed as a Haar measure.
  for (std::uint64_t p : s.first(kProductPrimes)) {
    r.units_product *= to_double(measure(CompactOpenSet(SetExpr::units(), p), MeasureKind::Add));
  }
  r.heuristic = r.m.type.kind == FactorType::Kind::III;
  return r;
}

NullComplement null_complement_check(const PrimeSubset& s, long depth) {
  NullComplement out;
  out.value = 0;
  out.witness =
      "union over p in S of the slices {b_p = 1/p}; each slice is a single point in its "
      "additive fiber, so the countable union is null";
  for (std::uint64_t p : check_primes(s)) {
    // Keep the normal form of the ball within 2^20 residues.
    long k = 1;
    for (std::uint64_t size = p * p; k < depth && size <= (1u << 20) / p; size *= p) ++k;
    const CompactOpenSet ball(SetExpr::ball(Rational(1, static_cast<long long>(p)), k), p);
    out.slice_bounds.emplace_back(p, measure(ball, MeasureKind::Add));
  }
  return out;
}

namespace {

std::vector<PrimeSubset> candidates(double lambda) {
  std::vector<PrimeSubset> out;
  if (lambda == 1) out.push_back(PrimeSubset::all_primes());
  const Rational target = lambda == 0 || lambda == 1 ? Rational(static_cast<long long>(lambda))
                                                      : parse_rational(std::to_string(lambda));
  for (std::uint64_t start : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    out.push_back(PrimeSubset::paired(target, start));
  }
  return out;
}

}  // namespace

SearchResult search_lambda(double lambda, const ClassifierParams& params, std::size_t budget,
                           Truncation truncation) {
  if (!(lambda >= 0 && lambda <= 1)) throw PreconditionViolation("target lambda must lie in [0, 1]");
  SearchResult result;
  for (const PrimeSubset& s : candidates(lambda)) {
    if (result.candidates == budget) break;
    ++result.candidates;
    QuantumGroupReport report = classify_pair(s, params, truncation);
    const FactorType& t = report.m.type;
    if (t.kind == FactorType::Kind::III && t.lambda && std::abs(*t.lambda - lambda) <= params.epsilon / 2) {
      result.subset = s;
      result.report = std::move(report);
      return result;
    }
  }
  throw BudgetExhausted("no subset reached lambda = " + std::to_string(lambda) + " within " +
                        std::to_string(result.candidates) + " candidates");
}

nlohmann::json to_json(const QuantumGroupReport& r) {
  return {{"subset", r.subset.str()},
          {"m", to_json(r.m)},
          {"m_dual", to_json(r.m_dual)},
          {"types", {r.m.type.family(), r.m_dual.type.family()}},
          {"checks",
           {{"dual_matches_tensor", r.dual_matches_tensor},
            {"dual_lists_match", r.dual_lists_match},
            {"selfdual_lists_match", r.selfdual_lists_match},
            {"selfdual_identity", r.selfdual_identity}}},
          {"inverse_prime_sum", to_json(r.inverse_prime_sum)},
          {"measure_dichotomy", r.measure_dichotomy},
          {"units_product", static_cast<double>(r.units_product)},
          {"heuristic", r.heuristic}};
}

nlohmann::json to_json(const NullComplement& c) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& [p, m] : c.slice_bounds) slices.push_back({{"prime", p}, {"ball_measure", to_string(m)}});
  return {{"value", to_string(c.value)}, {"witness", c.witness}, {"slices", slices}};
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j = to_json(r.report);
  j["candidates"] = r.candidates;
  j["heuristic"] = true;
  return j;
}

}  // namespace qgt
