#include "qgt/series.hpp"

#include "qgt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace qgt {

SeriesAtom SeriesAtom::power(const Rational& coeff, const Rational& exponent) {
  return SeriesAtom{coeff, exponent, {}};
}

SeriesAtom SeriesAtom::geometric(const Rational& coeff, const Rational& exponent,
                                 std::vector<SeriesFactor> factors, const Rational& r, long i0) {
  if (r <= 0) throw PreconditionViolation("geometric ratio exponent must be positive");
  factors.push_back({r, -1});
  return SeriesAtom{coeff, exponent + r * i0, std::move(factors)};
}

long double SeriesAtom::evaluate(std::uint64_t p) const {
  const long double lp = std::log(static_cast<long double>(p));
  long double v = static_cast<long double>(to_double(coeff)) * std::exp(-lp * to_double(exponent));
  for (const auto& f : factors) {
    v *= std::pow(1.0L - std::exp(-lp * to_double(f.u)), static_cast<long double>(f.k));
  }
  return v;
}

long double PrimeSeries::term(std::uint64_t p) const {
  long double t = 0;
  for (const auto& a : atoms) t += a.evaluate(p);
  return t;
}

std::string PrimeSeries::str() const {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += " + ";
    out += to_string(a.coeff) + "*p^(-" + to_string(a.exponent) + ")";
    for (const auto& f : a.factors) {
      out += "*(1-p^(-" + to_string(f.u) + "))^" + std::to_string(f.k);
    }
  }
  if (out.empty()) out = "0";
  return "sum over " + subset.str() + " of " + out;
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Converges: return "CONVERGES";
    case VerdictKind::Diverges: return "DIVERGES";
    case VerdictKind::Unknown: return "UNKNOWN";
  }
  return "?";
}

long double partial_sum(const PrimeSeries& series, std::size_t count) {
  long double s = 0;
  for (std::uint64_t p : series.subset.first(count)) s += series.term(p);
  return s;
}

namespace {

std::size_t evidence_count(const PrimeSubset& s) {
  switch (s.tail()) {
    case TailFamily::Growth:
    case TailFamily::Paired: return 2000;
    default: return 10000;
  }
}

Verdict unknown(const PrimeSeries& series, std::string rule) {
  Verdict v;
  v.kind = VerdictKind::Unknown;
  v.rule = std::move(rule);
  v.threshold = evidence_count(series.subset);
  const auto members = series.subset.first(v.threshold);
  v.threshold = members.size();
  for (std::uint64_t p : members) v.partial_sum += series.term(p);
  return v;
}

Verdict diverges(std::string rule) {
  Verdict v;
  v.kind = VerdictKind::Diverges;
  v.rule = std::move(rule);
  return v;
}

// Upper bound for sum over the tail members of p^(-s), s > 0.
long double tail_power_sum(const PrimeSubset& subset, long double s) {
  const long double floor = static_cast<long double>(subset.tail_floor());
  auto integral_bound = [s](long double q0) {
    return std::pow(q0, -s) + std::pow(q0, 1 - s) / (s - 1);
  };
  switch (subset.tail()) {
    case TailFamily::None: return 0;
    case TailFamily::AllPrimes:
    case TailFamily::ArithProg:
      if (subset.tail() == TailFamily::ArithProg &&
          std::gcd(subset.progression_residue(), subset.progression_modulus()) != 1) {
        const std::uint64_t a = subset.progression_residue();
        return is_prime(a) && a > subset.tail_floor() ? std::pow(static_cast<long double>(a), -s) : 0;
      }
      return integral_bound(std::max(2.0L, floor + 1));
    case TailFamily::Paired:
      return integral_bound(std::max<long double>({2.0L, floor + 1, static_cast<long double>(subset.pairing_start())}));
    case TailFamily::Growth: {
      const long double gs = s * to_double(subset.growth_exponent());
      return 1 + 1 / (gs - 1);
    }
  }
  return 0;
}

}  // namespace

Verdict decide(const PrimeSeries& input) {
  PrimeSeries series{{}, input.subset};
  for (const auto& a : input.atoms) {
    if (a.coeff < 0) return unknown(input, "grammar_escape:negative_coefficient");
    if (a.coeff == 0) continue;
    bool vanishes = false;
    SeriesAtom kept{a.coeff, a.exponent, {}};
    for (const auto& f : a.factors) {
      if (f.u < 0) return unknown(input, "grammar_escape:negative_factor_exponent");
      if (f.k == 0) continue;
      if (f.u == 0) {
        if (f.k < 0) return unknown(input, "grammar_escape:singular_factor");
        vanishes = true;
        break;
      }
      kept.factors.push_back(f);
    }
    if (!vanishes) series.atoms.push_back(std::move(kept));
  }
  if (series.atoms.empty()) {
    Verdict v;
    v.kind = VerdictKind::Converges;
    v.rule = "zero_series";
    return v;
  }

  Rational s_min = series.atoms.front().exponent;
  for (const auto& a : series.atoms) s_min = std::min(s_min, a.exponent);

  const PrimeSubset& subset = series.subset;
  std::optional<std::string> converge_rule;
  switch (subset.tail()) {
    case TailFamily::None:
      return unknown(series, "finite_subset_has_no_tail_verdict");
    case TailFamily::AllPrimes:
      if (s_min > 1) {
        converge_rule = "prime_zeta_converges";
      } else {
        return diverges(s_min == 1 ? "sum_1_over_p_diverges" : "dominates_sum_1_over_p");
      }
      break;
    case TailFamily::ArithProg:
      if (std::gcd(subset.progression_residue(), subset.progression_modulus()) != 1) {
        converge_rule = "progression_has_at_most_one_prime";
      } else if (s_min > 1) {
        converge_rule = "prime_zeta_converges";
      } else {
        return diverges("dirichlet_progression_diverges");
      }
      break;
    case TailFamily::Paired:
      if (s_min > 1) {
        converge_rule = "prime_zeta_converges";
      } else {
        return diverges("superset_of_dirichlet_progression");
      }
      break;
    case TailFamily::Growth:
      if (s_min * subset.growth_exponent() > 1) {
        converge_rule = "growth_comparison_converges";
      } else if (s_min <= 0) {
        return diverges("constant_terms_infinite_index");
      } else {
        return unknown(series, "growth_comparison_inconclusive");
      }
      break;
  }

  // Upper bound: each factor is at most its value at the smallest member.
  const auto smallest = subset.first(1);
  const long double p0 = smallest.empty() ? 2.0L : static_cast<long double>(smallest.front());
  long double bound = 0;
  for (const auto& a : series.atoms) {
    long double fmax = 1;
    for (const auto& f : a.factors) {
      if (f.k < 0) fmax *= std::pow(1 - std::pow(p0, -static_cast<long double>(to_double(f.u))), f.k);
    }
    const long double s = to_double(a.exponent);
    long double z = 0;
    for (std::uint64_t p : subset.explicit_primes()) z += std::pow(static_cast<long double>(p), -s);
    z += tail_power_sum(subset, s);
    bound += static_cast<long double>(to_double(a.coeff)) * fmax * z;
  }
  Verdict v;
  v.kind = VerdictKind::Converges;
  v.rule = *converge_rule;
  v.bound = rational_upper_bound(bound * (1 + 1e-12L));
  return v;
}

Verdict decide(const Comparison& comparison) {
  const Verdict lower = decide(comparison.lower);
  if (lower.diverges()) return lower;
  const Verdict upper = decide(comparison.upper);
  if (upper.converges()) return upper;
  Verdict v = upper.unknown() ? upper : lower;
  if (!v.unknown()) v = unknown(comparison.upper, "comparison_inconclusive");
  return v;
}

nlohmann::json to_json(const PrimeSubset& subset) {
  nlohmann::json j;
  j["explicit"] = subset.explicit_primes();
  j["tail"] = subset.tail_str();
  return j;
}

PrimeSubset subset_from_json(const nlohmann::json& j) {
  if (j.is_string()) return PrimeSubset::parse(j.get<std::string>());
  if (!j.is_object()) throw ParseError("subset must be a string or an object");
  std::vector<std::uint64_t> primes;
  if (j.contains("explicit")) primes = j.at("explicit").get<std::vector<std::uint64_t>>();
  PrimeSubset s;
  if (j.contains("tail")) {
    const auto tail = j.at("tail").get<std::string>();
    if (tail != "none" && !tail.empty()) s = PrimeSubset::parse(tail);
  }
  return s.with_explicit(primes);
}

nlohmann::json to_json(const PrimeSeries& series) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : series.atoms) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : a.factors) factors.push_back({{"u", to_string(f.u)}, {"k", f.k}});
    atoms.push_back({{"coeff", to_string(a.coeff)}, {"exponent", to_string(a.exponent)}, {"factors", factors}});
  }
  return {{"subset", to_json(series.subset)}, {"atoms", atoms}};
}

PrimeSeries series_from_json(const nlohmann::json& j) {
  try {
    PrimeSeries s;
    s.subset = subset_from_json(j.at("subset"));
    for (const auto& a : j.at("atoms")) {
      SeriesAtom atom;
      atom.coeff = parse_rational(a.value("coeff", std::string("1")));
      atom.exponent = parse_rational(a.at("exponent").get<std::string>());
      if (a.contains("factors")) {
        for (const auto& f : a.at("factors")) {
          atom.factors.push_back({parse_rational(f.at("u").get<std::string>()), f.at("k").get<long>()});
        }
      }
      s.atoms.push_back(std::move(atom));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j{{"verdict", to_string(v.kind)}, {"rule", v.rule}};
  if (v.converges()) {
    j["bound"] = to_string(v.bound);
  } else if (v.unknown()) {
    j["partial_sum"] = static_cast<double>(v.partial_sum);
    j["threshold"] = v.threshold;
  }
  return j;
}

}  // namespace qgt
