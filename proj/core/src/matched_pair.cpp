#include "qgt/matched_pair.hpp"

#include <random>
#include <set>

namespace qgt {

namespace {

template <class... Maps>
std::set<std::uint64_t> support(const Maps&... maps) {
  std::set<std::uint64_t> out;
  (([&] {
     for (const auto& [p, v] : maps) out.insert(p);
   }()),
   ...);
  return out;
}

void require_prime_key(std::uint64_t p) {
  if (p < 2) throw PreconditionViolation("adelic component at non-prime index " + std::to_string(p));
}

}  // namespace

Rational UnitFamily::at(std::uint64_t p) const {
  const auto it = values.find(p);
  return it == values.end() ? Rational(1) : it->second;
}

Rational G2Element::at(std::uint64_t p) const {
  const auto it = values.find(p);
  return it == values.end() ? Rational(1) : it->second;
}

AxbElement AxbElement::at_prime(std::uint64_t p, const Rational& a, const Rational& b) {
  if (a == 0) throw PreconditionViolation("a_p must be nonzero");
  AxbElement x;
  x.values[p] = {a, b};
  return x;
}

AxbPair<Rational> AxbElement::at(std::uint64_t p) const {
  const auto it = values.find(p);
  return it == values.end() ? AxbPair<Rational>{1, 0} : it->second;
}

AxbElement operator*(const AxbElement& x, const AxbElement& y) {
  AxbElement out;
  for (std::uint64_t p : support(x.values, y.values)) out.values[p] = local::mul(x.at(p), y.at(p));
  return out;
}

bool operator==(const AxbElement& x, const AxbElement& y) {
  for (std::uint64_t p : support(x.values, y.values)) {
    if (!local::equal(x.at(p), y.at(p))) return false;
  }
  return true;
}

AxbElement as_axb(const UnitFamily& g) {
  AxbElement out;
  for (const auto& [p, v] : g.values) out.values[p] = local::g1(v, p);
  return out;
}

AxbElement as_axb(const G2Element& s) {
  AxbElement out;
  for (const auto& [p, v] : s.values) out.values[p] = local::g2(v, p);
  return out;
}

G2Element alpha(const UnitFamily& g, const G2Element& s) {
  G2Element out;
  for (std::uint64_t p : support(g.values, s.values)) {
    require_prime_key(p);
    out.values[p] = local::alpha(g.at(p), s.at(p), p);
  }
  return out;
}

UnitFamily beta(const G2Element& s, const UnitFamily& g) {
  UnitFamily out;
  for (std::uint64_t p : support(g.values, s.values)) {
    require_prime_key(p);
    out.values[p] = local::beta(s.at(p), g.at(p), p);
  }
  return out;
}

bool reconstruct_check(const UnitFamily& g, const G2Element& s) {
  return as_axb(g) * as_axb(s) == as_axb(alpha(g, s)) * as_axb(beta(s, g));
}

std::pair<G2Element, UnitFamily> factorize(const AxbElement& x) {
  G2Element s;
  UnitFamily h;
  for (const auto& [p, pair] : x.values) {
    require_prime_key(p);
    auto [sp, hp] = local::factorize(pair, p);
    s.values[p] = sp;
    h.values[p] = hp;
  }
  return {s, h};
}

Rational delta(const UnitFamily& x) {
  Rational out = 1;
  for (const auto& [p, v] : x.values) {
    if (v == 0) throw PreconditionViolation("delta of a zero component");
    out *= rpow(Rational(p), valuation(v, p));
  }
  return out;
}

G2Element selfdual_u(const UnitFamily& g) {
  G2Element out;
  for (const auto& [p, v] : g.values) {
    if (v == 0) throw SingularPair("u(0) is undefined");
    out.values[p] = 1 / v;
  }
  return out;
}

bool selfdual_check(const G2Element& s, const UnitFamily& g) {
  for (std::uint64_t p : support(g.values, s.values)) {
    if (!local::selfdual_check(s.at(p), g.at(p), p)) return false;
  }
  return true;
}

nlohmann::json to_json(const AxbElement& x) {
  nlohmann::json primes = nlohmann::json::object();
  for (const auto& [p, pair] : x.values) {
    primes[std::to_string(p)] = {{"a", to_string(pair.a)}, {"b", to_string(pair.b)}};
  }
  return {{"primes", primes}, {"tail", "integral"}};
}

AxbElement axb_from_json(const nlohmann::json& j) {
  try {
    if (j.value("tail", std::string("integral")) != "integral") {
      throw ParseError("only the integral tail convention is supported");
    }
    AxbElement x;
    for (const auto& [key, pair] : j.at("primes").items()) {
      const std::uint64_t p = std::stoull(key);
      const Rational a = parse_rational(pair.at("a").get<std::string>());
      const Rational b = parse_rational(pair.at("b").get<std::string>());
      if (a == 0) throw ParseError("a_p must be nonzero");
      x.values[p] = {a, b};
    }
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("adelic element JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("prime keys must be integers");
  }
}

namespace {

PadicNumber random_padic(std::uint64_t p, unsigned digits, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> valuation(-2, 2);
  std::uniform_int_distribution<std::uint64_t> unit_digit(1, p - 1);
  std::uniform_int_distribution<std::uint64_t> digit(0, p - 1);
  std::vector<std::uint32_t> d(digits);
  d[0] = static_cast<std::uint32_t>(unit_digit(rng));
  for (unsigned i = 1; i < digits; ++i) d[i] = static_cast<std::uint32_t>(digit(rng));
  return PadicNumber::from_digits(p, valuation(rng), d);
}

}  // namespace

SampleReport verify_samples(std::uint64_t p, std::size_t samples, std::uint64_t seed, PrecisionContext ctx) {
  SampleReport report;
  report.prime = p;
  report.samples = samples;
  std::mt19937_64 rng(seed ^ (p * 0x9e3779b97f4a7c15ULL));
  for (std::size_t i = 0; i < samples; ++i) {
    const PadicNumber g = random_padic(p, ctx.digits, rng);
    const PadicNumber h = random_padic(p, ctx.digits, rng);
    const PadicNumber s = random_padic(p, ctx.digits, rng);
    const PadicNumber t = random_padic(p, ctx.digits, rng);
    const AxbPair<PadicNumber> x{random_padic(p, ctx.digits, rng), random_padic(p, ctx.digits, rng)};
    try {
      const std::pair<const char*, bool> laws[] = {
          {"reconstruct", local::reconstruct_check(g, s, p)},
          {"alpha_action", local::alpha_action_law(g, h, s, p)},
          {"alpha_cocycle", local::alpha_cocycle_law(g, s, t, p)},
          {"beta_action", local::beta_action_law(s, t, g, p)},
          {"beta_cocycle", local::beta_cocycle_law(s, g, h, p)},
          {"factorize_round_trip", local::factorize_round_trip(x, p)},
          {"selfdual", local::selfdual_check(s, g, p)},
      };
      for (const auto& [law, ok] : laws) {
        if (!ok) ++report.failures[law];
      }
    } catch (const SingularPair&) {
      ++report.singular;
    } catch (const NullSetElement&) {
      ++report.singular;
    }
  }
  return report;
}

}  // namespace qgt
