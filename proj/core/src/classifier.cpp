#include "qgt/classifier.hpp"

#include "qgt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>

namespace qgt {

std::string FactorType::family() const {
  switch (kind) {
    case Kind::IFinite: return "I_FINITE";
    case Kind::IInf: return "I_INF";
    case Kind::II1: return "II_1";
    case Kind::IIInf: return "II_INF";
    case Kind::III: return "III";
    case Kind::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

std::string FactorType::str() const {
  switch (kind) {
    case Kind::IFinite: return "I_FINITE(" + std::to_string(n) + ")";
    case Kind::III: {
      if (!lambda) return "III(unknown)";
      std::ostringstream os;
      os << "III(" << *lambda << ")";
      return os.str();
    }
    case Kind::Indeterminate: return "INDETERMINATE(" + reason + ")";
    default: return family();
  }
}

bool operator==(const FactorType& a, const FactorType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FactorType::Kind::IFinite: return a.n == b.n;
    case FactorType::Kind::III:
      if (a.lambda.has_value() != b.lambda.has_value()) return false;
      return !a.lambda || std::abs(*a.lambda - *b.lambda) <= std::max(a.tolerance, b.tolerance) + 1e-12;
    default: return true;
  }
}

namespace {

constexpr std::size_t kFallbackPrimes = 200;

std::vector<SeriesAtom> scaled(std::vector<SeriesAtom> atoms, const Rational& c) {
  for (auto& a : atoms) a.coeff *= c;
  return atoms;
}

// UNKNOWN verdict carrying a numeric partial sum of `term` over the first
// members of the subset.
template <typename Term>
Verdict numeric_fallback(const ITPFISpec& spec, std::string rule, Term term) {
  Verdict v;
  v.kind = VerdictKind::Unknown;
  v.rule = std::move(rule);
  const auto primes = spec.subset.first(std::min(spec.truncation.primes, kFallbackPrimes));
  NumericLevels levels;
  for (std::uint64_t p : primes) {
    numeric_levels(spec.rule, p, spec.truncation.levels, levels);
    v.partial_sum += term(levels);
  }
  v.threshold = primes.size();
  return v;
}

long double three_term(const NumericLevels& levels, long double cap) {
  if (levels.empty()) return 0;
  const long double top = levels.front().first;
  long double t = 0;
  for (const auto& [value, mult] : levels) {
    const long double d = top / value - 1;
    t += mult * value * std::min(d * d, cap);
  }
  return t;
}

double smallest_top(const ITPFISpec& spec) {
  double best = 1;
  NumericLevels levels;
  for (std::uint64_t p : spec.subset.explicit_primes()) {
    numeric_levels(spec.rule, p, 1, levels);
    if (!levels.empty()) best = std::min(best, levels.front().first);
  }
  return best;
}

}  // namespace

Verdict type_three_test(const ITPFISpec& spec, const ClassifierParams& params) {
  if (params.C <= 0) throw PreconditionViolation("the cap C must be positive");
  const RuleAsymptotics a = asymptotics(spec.rule, spec.smallest_prime());
  if (a.escapes) {
    const long double cap = to_double(params.C);
    return numeric_fallback(spec, "grammar_escape",
                            [cap](const NumericLevels& l) { return three_term(l, cap); });
  }
  const double top = spec.subset.is_finite() ? smallest_top(spec) : std::min(a.top_lower, smallest_top(spec));
  if (top < params.delta_min) {
    throw DeltaViolated("top eigenvalues of " + spec.rule.str() + " are not bounded below by " +
                        std::to_string(params.delta_min));
  }
  // Off the top value every ratio lambda_1 / lambda_i is at least the gap.
  Rational kappa = params.C;
  if (std::isfinite(a.gap_lower)) {
    const long double g = a.gap_lower - 1.0L;
    kappa = std::min(kappa, rational_lower_bound(g * g));
  }
  const Comparison c{spec.series(scaled(a.off_top_lower, kappa)), spec.series(scaled(a.off_top_upper, params.C))};
  return decide(c);
}

Verdict type_one_test(const ITPFISpec& spec) {
  const RuleAsymptotics a = asymptotics(spec.rule, spec.smallest_prime());
  if (a.escapes) {
    return numeric_fallback(spec, "grammar_escape", [](const NumericLevels& l) {
      return l.empty() ? 0.0L : 1.0L - static_cast<long double>(l.front().first) * l.front().second;
    });
  }
  return decide(Comparison{spec.series(a.one_minus_top_lower), spec.series(a.one_minus_top_upper)});
}

namespace {

struct RatioSample {
  double ratio;
  std::size_t block;
  double weight;
};

void block_levels(const ListRule& rule, const std::vector<std::uint64_t>& block, std::size_t keep,
                  NumericLevels& out) {
  NumericLevels next;
  NumericLevels prod;
  numeric_levels(rule, block.front(), keep, out);
  for (std::size_t i = 1; i < block.size(); ++i) {
    numeric_levels(rule, block[i], keep, next);
    prod.clear();
    for (const auto& x : out) {
      for (const auto& y : next) prod.emplace_back(x.first * y.first, x.second * y.second);
    }
    std::sort(prod.begin(), prod.end(), [](const auto& u, const auto& v) { return u.first > v.first; });
    out.clear();
    for (const auto& e : prod) {
      if (!out.empty() && std::abs(out.back().first - e.first) <= 1e-12 * out.back().first) {
        out.back().second += e.second;
      } else {
        if (out.size() == keep) break;
        out.push_back(e);
      }
    }
  }
}

}  // namespace

RatioEstimate ratio_set(const ITPFISpec& spec, const ClassifierParams& params) {
  RatioEstimate est;
  est.tolerance = params.epsilon;
  const auto blocks = spec.subset.blocks(std::max<std::size_t>(spec.truncation.primes / 2, 2));
  // Only the second half of the blocks counts: ratios that appear there
  // keep appearing, which stands in for divergence of their weight.
  const std::size_t start = blocks.size() / 2;
  const std::size_t window = blocks.size() - start;
  est.blocks = window;
  if (window < 2) {
    est.evidence = "too_few_blocks";
    return est;
  }
  std::vector<RatioSample> samples;
  NumericLevels levels;
  for (std::size_t b = start; b < blocks.size(); ++b) {
    block_levels(spec.rule, blocks[b], params.ratio_levels, levels);
    for (std::size_t i = 1; i < levels.size(); ++i) {
      samples.push_back({levels[i].first / levels[i - 1].first, b, levels[i - 1].first});
    }
  }
  std::sort(samples.begin(), samples.end(), [](const auto& x, const auto& y) { return x.ratio < y.ratio; });

  const double eps = params.epsilon;
  std::map<std::size_t, std::size_t> seen;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < samples.size()) {
    j = std::max(j, i);
    while (j < samples.size() && samples[j].ratio <= samples[i].ratio * (1 + 2 * eps)) {
      ++seen[samples[j].block];
      ++j;
    }
    if (2 * seen.size() >= window) {
      est.persistent.push_back(samples[i + (j - i - 1) / 2].ratio);
      for (std::size_t k = i; k < j; ++k) est.weight += samples[k].weight;
      seen.clear();
      i = j;
      continue;
    }
    if (--seen[samples[i].block] == 0) seen.erase(samples[i].block);
    ++i;
  }

  if (est.persistent.empty()) {
    est.lambda = 0;
    est.evidence = "no_persistent_ratio";
    return est;
  }
  if (est.persistent.back() >= 1 - 2 * eps) {
    est.lambda = 1;
    est.evidence = "ratios_accumulate_at_one";
    return est;
  }
  // Look for a single generator: every persistent ratio a power of it.
  std::vector<double> logs;
  for (double r : est.persistent) logs.push_back(-std::log(r));
  const double smallest = *std::min_element(logs.begin(), logs.end());
  for (int n = 1; n <= 12; ++n) {
    const double ell = smallest / n;
    const bool fits = std::all_of(logs.begin(), logs.end(), [&](double x) {
      const double k = std::round(x / ell);
      return k >= 1 && std::abs(x - k * ell) <= 2 * eps * k;
    });
    if (fits) {
      est.lambda = std::exp(-ell);
      est.evidence = est.persistent.size() == 1 ? "single_generator" : "common_generator";
      return est;
    }
  }
  est.lambda = 1;
  est.evidence = "incommensurable_generators";
  return est;
}

Verdict t_test(const ITPFISpec& spec, double t) {
  if (!std::isfinite(t)) throw PreconditionViolation("t must be finite");
  Verdict v;
  if (t == 0) {
    v.kind = VerdictKind::Converges;
    v.rule = "mass_normalization";
    return v;
  }
  if (spec.rule.prime_independent()) {
    NumericLevels levels;
    numeric_levels(spec.rule, spec.smallest_prime(), spec.truncation.levels, levels);
    // Phases relative to the top value, so that lattice points give exact
    // alignment up to rounding.
    std::complex<long double> sum = 0;
    const long double top = levels.front().first;
    for (const auto& [value, mult] : levels) {
      const long double phase = static_cast<long double>(t) * std::log(value / top);
      sum += static_cast<long double>(mult) * value * std::polar(1.0L, phase);
    }
    const long double tau = 1 - std::abs(sum);
    if (tau <= 1e-12L) {
      v.kind = VerdictKind::Converges;
      v.rule = "lattice_phase_alignment";
      return v;
    }
    if (spec.subset.is_finite()) {
      v.kind = VerdictKind::Converges;
      v.rule = "finite_subset";
      v.bound = rational_upper_bound(tau * spec.subset.explicit_primes().size() * (1 + 1e-12L));
      return v;
    }
    v.kind = VerdictKind::Diverges;
    v.rule = "constant_positive_terms";
    return v;
  }
  // 1 - |sum| <= 2 * (mass off the top value).
  const RuleAsymptotics a = asymptotics(spec.rule, spec.smallest_prime());
  if (!a.escapes) {
    const PrimeSeries off = spec.series(a.off_top_upper);
    const Verdict c = decide(off);
    if (c.converges()) {
      v.kind = VerdictKind::Converges;
      v.rule = "block_defect_converges";
      v.bound = 2 * c.bound;
      return v;
    }
  }
  return numeric_fallback(spec, "probe_inconclusive", [t](const NumericLevels& l) {
    std::complex<long double> sum = 0;
    const long double top = l.front().first;
    for (const auto& [value, mult] : l) {
      sum += static_cast<long double>(mult) * value * std::polar(1.0L, t * std::log(value / top));
    }
    return 1 - std::abs(sum);
  });
}

FactorType tensor_type(const FactorType& a, const FactorType& b) {
  using K = FactorType::Kind;
  if (!a.determinate() || !b.determinate()) throw IndeterminateInput("tensor_type needs determinate types");
  if (a.kind == K::III && b.kind == K::III) {
    if (a == b) return a;
    if ((a.lambda && *a.lambda == 1) || (b.lambda && *b.lambda == 1)) {
      return FactorType::iii(1, std::max(a.tolerance, b.tolerance), a.heuristic || b.heuristic);
    }
    return FactorType::iii(std::nullopt, 0, true);
  }
  if (a.kind == K::III) return a;
  if (b.kind == K::III) return b;
  if (a.kind == K::IIInf || b.kind == K::IIInf) return FactorType::ii_inf();
  const bool a_two = a.kind == K::II1;
  const bool b_two = b.kind == K::II1;
  if (a_two && b_two) return FactorType::ii_1();
  if (a_two || b_two) {
    const FactorType& other = a_two ? b : a;
    return other.kind == K::IInf ? FactorType::ii_inf() : FactorType::ii_1();
  }
  if (a.kind == K::IFinite && b.kind == K::IFinite) return FactorType::i_finite(a.n * b.n);
  return FactorType::i_inf();
}

namespace {

bool is_uniform(const ListRule& r) {
  return r.kind == ListRule::Kind::Uniform || (r.kind == ListRule::Kind::Powers && r.lambda == 1);
}

// Uniform factors of size > 1 at infinitely many primes make the product
// tensor with the hyperfinite II_1 factor.
bool nontrivial_uniform(const ListRule& r) {
  if (r.kind == ListRule::Kind::Powers) return true;
  return r.slope > 0 || (r.slope == 0 && r.offset > 1);
}

FactorType amplify(FactorType t) {
  if (t.kind == FactorType::Kind::IFinite) return FactorType::i_inf();
  if (t.kind == FactorType::Kind::II1) return FactorType::ii_inf();
  return t;
}

Classification classify_core(const ITPFISpec& spec, const ClassifierParams& params) {
  Classification out;
  const ListRule& rule = spec.rule;

  if (rule.kind == ListRule::Kind::Corner && rule.corner == ListRule::CornerKind::Dual) {
    Classification inner = classify_core(remove_summable_copies(spec), params);
    inner.steps.insert(inner.steps.begin(), "remove_summable_copies");
    return inner;
  }
  if (rule.kind == ListRule::Kind::Corner && rule.corner == ListRule::CornerKind::SelfDual) {
    ITPFISpec rewritten = spec;
    rewritten.rule = ListRule::tensor({ListRule::boca(1), ListRule::uniform_affine(1, -1)});
    Classification inner = classify_core(rewritten, params);
    inner.steps.insert(inner.steps.begin(), "selfdual_as_tensor");
    return inner;
  }
  if (is_uniform(rule) || rule.kind == ListRule::Kind::Tensor) {
    const std::vector<ListRule> factors = rule.kind == ListRule::Kind::Tensor ? rule.factors : std::vector{rule};
    std::vector<ListRule> rest;
    bool tracial = false;
    for (const auto& f : factors) {
      if (is_uniform(f)) {
        tracial = tracial || nontrivial_uniform(f);
      } else {
        rest.push_back(f);
      }
    }
    if (rest.size() != factors.size() || rule.kind != ListRule::Kind::Tensor) {
      ITPFISpec core = spec;
      if (rest.empty()) {
        core.rule = ListRule::uniform(1);
      } else {
        core.rule = rest.size() == 1 ? rest.front() : ListRule::tensor(rest);
      }
      if (rest.empty()) {
        out.type = FactorType::i_finite(1);
        out.steps.push_back("point_mass");
      } else {
        out = classify_core(core, params);
      }
      out.steps.insert(out.steps.begin(), "factor_uniform");
      if (tracial && out.type.determinate()) out.type = tensor_type(out.type, FactorType::ii_1());
      return out;
    }
  }

  out.three = type_three_test(spec, params);
  if (out.three->diverges()) {
    out.ratio = ratio_set(spec, params);
    out.type = FactorType::iii(out.ratio->lambda, out.ratio->tolerance, true);
    return out;
  }
  if (out.three->unknown()) {
    out.type = FactorType::indeterminate("type III series verdict unknown (" + out.three->rule + ")");
    return out;
  }
  out.one = type_one_test(spec);
  if (out.one->converges()) {
    const RuleAsymptotics a = asymptotics(rule, spec.smallest_prime());
    out.type = a.one_minus_top_upper.empty() ? FactorType::i_finite(1) : FactorType::i_inf();
  } else if (out.one->diverges()) {
    out.type = FactorType::ii_1();
  } else {
    out.type = FactorType::indeterminate("type I series verdict unknown (" + out.one->rule + ")");
  }
  return out;
}

}  // namespace

Classification classify(const ITPFISpec& spec, const ClassifierParams& params) {
  if (!(params.C > 0) || !(params.epsilon > 0 && params.epsilon < 1)) {
    throw PreconditionViolation("classifier needs C > 0 and 0 < epsilon < 1");
  }
  if (spec.subset.is_finite()) {
    Classification out;
    out.type = FactorType::indeterminate("finite subset has no tail verdict");
    return out;
  }
  Classification out = classify_core(spec, params);
  if (spec.amplified && out.type.determinate()) {
    out.type = amplify(out.type);
    out.steps.push_back("amplified");
  }
  return out;
}

nlohmann::json to_json(const FactorType& type) {
  nlohmann::json j{{"type", type.family()}};
  switch (type.kind) {
    case FactorType::Kind::IFinite: j["n"] = type.n; break;
    case FactorType::Kind::III:
      if (type.lambda) {
        j["lambda"] = {{"estimate", *type.lambda}, {"tolerance", type.tolerance}, {"heuristic", type.heuristic}};
      } else {
        j["lambda"] = {{"estimate", nullptr}, {"subtype", "unknown"}, {"heuristic", type.heuristic}};
      }
      break;
    case FactorType::Kind::Indeterminate: j["reason"] = type.reason; break;
    default: break;
  }
  return j;
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j = to_json(c.type);
  nlohmann::json evidence = nlohmann::json::object();
  if (c.three) {
    evidence["rule"] = c.three->rule;
    evidence["type_three"] = to_json(*c.three);
  }
  if (c.one) evidence["type_one"] = to_json(*c.one);
  if (c.ratio) {
    evidence["ratio_set"] = {{"evidence", c.ratio->evidence},
                             {"persistent", c.ratio->persistent},
                             {"weight", c.ratio->weight},
                             {"blocks", c.ratio->blocks},
                             {"heuristic", true}};
  }
  if (!c.steps.empty()) evidence["steps"] = c.steps;
  j["evidence"] = evidence;
  return j;
}

}  // namespace qgt
