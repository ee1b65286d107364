#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgt/errors.hpp"
#include "qgt/series.hpp"

#include <cmath>

using namespace qgt;

namespace {

PrimeSeries series(std::vector<SeriesAtom> atoms, const char* subset) {
  return {std::move(atoms), PrimeSubset::parse(subset)};
}

SeriesAtom atom(const Rational& c, const Rational& s, std::vector<SeriesFactor> f = {}) { return {c, s, std::move(f)}; }

// Direct partial sum of f(p) over the given members.
template <class F>
double direct_sum(const std::vector<std::uint64_t>& members, F f) {
  double s = 0;
  for (auto p : members) s += f(static_cast<double>(p));
  return s;
}

}  // namespace

TEST(Series, SumOverGeometricLevelsIsInversePrimeSum) {
  // sum_{i >= 1} (1 - 1/p) p^-i = 1/p.
  const auto a = SeriesAtom::geometric(1, 0, {{1, 1}}, 1, 1);
  for (std::uint64_t p : {2, 3, 101}) EXPECT_NEAR(static_cast<double>(a.evaluate(p)), 1.0 / p, 1e-15);
  const auto v = decide(series({a}, "all_primes"));
  EXPECT_TRUE(v.diverges());
  EXPECT_EQ(v.rule, "sum_1_over_p_diverges");
}

TEST(Series, ShiftedSquareConverges) {
  // (p - 1)^-2 = p^-2 (1 - 1/p)^-2.
  const auto a = atom(1, 2, {{1, -2}});
  for (std::uint64_t p : {2, 3, 7}) EXPECT_NEAR(static_cast<double>(a.evaluate(p)), 1.0 / ((p - 1.0) * (p - 1.0)), 1e-15);
  const auto v = decide(series({a}, "all_primes"));
  EXPECT_TRUE(v.converges());
  EXPECT_EQ(v.rule, "prime_zeta_converges");
}

TEST(Series, BocaCornerRemainder) {
  for (auto [beta, m] : {std::pair{Rational(1), 2}, {Rational(3, 5), 2}, {Rational(2, 5), 3}}) {
    EXPECT_TRUE(decide(series({atom(1, beta * m)}, "all_primes")).converges());
  }
  EXPECT_TRUE(decide(series({atom(1, 1)}, "all_primes")).diverges());
  EXPECT_TRUE(decide(series({atom(1, Rational(4, 5))}, "all_primes")).diverges());
}

TEST(Series, GrowthFamily) {
  const auto v = decide(series({atom(1, 1)}, "growth(2)"));
  EXPECT_TRUE(v.converges());
  EXPECT_EQ(v.rule, "growth_comparison_converges");
  EXPECT_TRUE(decide(series({atom(1, 0)}, "growth(2)")).diverges());
  EXPECT_TRUE(decide(series({atom(1, Rational(1, 3))}, "growth(2)")).unknown());
}

TEST(Series, ProgressionsAndPairs) {
  EXPECT_TRUE(decide(series({atom(1, 1)}, "arith_prog(1,4)")).diverges());
  EXPECT_TRUE(decide(series({atom(1, 2)}, "arith_prog(3,4)")).converges());
  EXPECT_TRUE(decide(series({atom(1, 0)}, "arith_prog(2,4)")).converges());
  EXPECT_TRUE(decide(series({atom(1, 1)}, "paired(1/2,1000)")).diverges());
}

TEST(Series, FiniteSubsetIsUnknownWithEvidence) {
  const auto v = decide(series({atom(1, 1)}, "explicit(2,3,5)"));
  ASSERT_TRUE(v.unknown());
  EXPECT_EQ(v.threshold, 3u);
  EXPECT_NEAR(static_cast<double>(v.partial_sum), 1.0 / 2 + 1.0 / 3 + 1.0 / 5, 1e-15);
}

TEST(Series, GrammarEscapesAreUnknown) {
  EXPECT_TRUE(decide(series({atom(-1, 2)}, "all_primes")).unknown());
  EXPECT_TRUE(decide(series({atom(1, 2, {{0, -1}})}, "all_primes")).unknown());
  EXPECT_TRUE(decide(series({}, "all_primes")).converges());
}

TEST(Series, ComparisonUsesBothSides) {
  const auto lower = series({atom(1, 1)}, "all_primes");
  const auto upper = series({atom(2, 1)}, "all_primes");
  EXPECT_TRUE(decide(Comparison{lower, upper}).diverges());
  const auto small = series({atom(1, 3)}, "all_primes");
  EXPECT_TRUE(decide(Comparison{small, small}).converges());
  EXPECT_TRUE(decide(Comparison{small, upper}).unknown());
}

TEST(SeriesProperty, BoundsDominatePartialSums) {
  const auto primes = oracle::first_primes(10000);
  struct Case {
    std::vector<SeriesAtom> atoms;
    double (*f)(double);
  };
  const std::vector<Case> cases = {
      {{atom(1, 2, {{1, -2}})}, [](double p) { return 1 / ((p - 1) * (p - 1)); }},
      {{atom(1, 2)}, [](double p) { return 1 / (p * p); }},
      {{atom(1, Rational(6, 5))}, [](double p) { return std::pow(p, -1.2); }},
      {{atom(3, Rational(3, 2)), atom(1, 2, {{1, 1}})}, [](double p) { return 3 * std::pow(p, -1.5) + (1 - 1 / p) / (p * p); }},
  };
  for (const auto& c : cases) {
    const auto v = decide(series(c.atoms, "all_primes"));
    ASSERT_TRUE(v.converges());
    EXPECT_LE(direct_sum(primes, c.f), to_double(v.bound));
  }
  const auto growth = PrimeSubset::growth(2).first(2000);
  const auto vg = decide(series({atom(1, 1)}, "growth(2)"));
  EXPECT_LE(direct_sum(growth, [](double p) { return 1 / p; }), to_double(vg.bound));
  const auto with_head = decide(series({atom(1, 2)}, "explicit(2,3)+arith_prog(1,4)"));
  ASSERT_TRUE(with_head.converges());
  EXPECT_LE(direct_sum(PrimeSubset::parse("explicit(2,3)+arith_prog(1,4)").first(10000),
                       [](double p) { return 1 / (p * p); }),
            to_double(with_head.bound));
}

TEST(SeriesProperty, AddingAtomsKeepsDivergence) {
  const std::vector<SeriesAtom> extras = {atom(1, 3), atom(5, 2, {{1, -2}}), atom(1, Rational(1, 2))};
  for (const char* subset : {"all_primes", "arith_prog(1,4)", "paired(1/2,1000)"}) {
    std::vector<SeriesAtom> atoms = {atom(1, 1)};
    ASSERT_TRUE(decide(series(atoms, subset)).diverges());
    for (const auto& e : extras) {
      atoms.push_back(e);
      EXPECT_TRUE(decide(series(atoms, subset)).diverges()) << subset;
    }
  }
}

TEST(Series, JsonRoundTrip) {
  const auto s = series({atom(Rational(1, 2), 2, {{1, -2}})}, "explicit(2)+growth(2)");
  const auto back = series_from_json(to_json(s));
  EXPECT_EQ(back.atoms, s.atoms);
  EXPECT_EQ(back.subset, s.subset);
  const auto j = to_json(decide(s));
  EXPECT_EQ(j["verdict"], "CONVERGES");
  EXPECT_EQ(j["rule"], "growth_comparison_converges");
  EXPECT_THROW(series_from_json(nlohmann::json::parse(R"({"subset": "all_primes"})")), ParseError);
}
