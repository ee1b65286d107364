#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgt/errors.hpp"
#include "qgt/haar.hpp"

#include <random>

using namespace qgt;

namespace {

CompactOpenSet set(const char* text, std::uint64_t p) { return CompactOpenSet::parse(text, p); }

}  // namespace

TEST(Haar, NamedMeasures) {
  for (std::uint64_t p : {2, 3, 5, 7, 11}) {
    const Rational pr(static_cast<long long>(p));
    EXPECT_EQ(measure(set("units", p), MeasureKind::Add), 1 - 1 / pr);
    EXPECT_EQ(measure(set("one_plus_p", p), MeasureKind::Mu), 1);
    EXPECT_EQ(measure(set("units", p), MeasureKind::Mu), pr - 1);
    EXPECT_EQ(measure(set("units", p), MeasureKind::Mult), 1);
    EXPECT_EQ(measure(set("units", p), MeasureKind::Nu), 1);
    EXPECT_EQ(measure(set("ball(0, 0)", p), MeasureKind::Add), 1);
  }
}

TEST(Haar, BallMeasureMatchesResidueCount) {
  for (std::uint64_t p : {2, 3, 5}) {
    for (unsigned n = 0; n <= 3; ++n) {
      const std::uint64_t pn = oracle::upow(p, n);
      const double expected = oracle::residue_measure(p, n + 2, [pn](std::uint64_t x, std::uint64_t) { return x % pn == 0; });
      const auto s = CompactOpenSet(SetExpr::ball(0, static_cast<long>(n)), p);
      EXPECT_DOUBLE_EQ(to_double(measure(s, MeasureKind::Add)), expected);
    }
  }
}

TEST(Haar, TranslateOfUnitsMeasure) {
  for (std::uint64_t p : {3, 5, 7}) {
    const double expected = oracle::residue_measure(p, 3, oracle::units_minus_one(p));
    EXPECT_DOUBLE_EQ(to_double(measure(set("translate(units, -1)", p), MeasureKind::Add)), expected);
  }
}

TEST(Haar, MultiplicativeMeasureOfZeroBallIsUnbounded) {
  EXPECT_THROW(measure(set("ball(0, 0)", 3), MeasureKind::Mult), UnboundedSet);
}

TEST(Haar, CosetCounts) {
  for (std::uint64_t p : {3, 5, 7, 11}) {
    const auto zp = set("ball(0, 0)", p);
    const auto um1 = set("translate(units, -1)", p);
    for (long n = 0; n <= 4; ++n) {
      EXPECT_EQ(coset_count(zp, n, NamedSubgroup::units()), 1u);
      EXPECT_EQ(coset_count(zp, n, NamedSubgroup::principal_units()), p - 1);
      EXPECT_EQ(coset_count(um1, n, NamedSubgroup::principal_units()), n == 0 ? p - 2 : p - 1);
    }
  }
}

TEST(Haar, CosetCountsMatchOrbitOracle) {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (unsigned n = 0; n <= 4; ++n) {
      EXPECT_EQ(coset_count(set("ball(0, 0)", p), n, NamedSubgroup::units()),
                oracle::orbit_count(p, n, 0, oracle::integers()));
      EXPECT_EQ(coset_count(set("translate(units, -1)", p), n, NamedSubgroup::principal_units()),
                oracle::orbit_count(p, n, 1, oracle::units_minus_one(p)));
    }
  }
}

TEST(Haar, CosetCountConsistentWithMeasure) {
  for (std::uint64_t p : {3, 5}) {
    for (long n = 0; n <= 3; ++n) {
      const auto L = set("translate(units, -1)", p);
      EXPECT_EQ(coset_count_by_measure(L, n, NamedSubgroup::principal_units()),
                Rational(static_cast<long long>(coset_count(L, n, NamedSubgroup::principal_units()))));
    }
  }
}

TEST(Haar, NotInvariantRejected) {
  // 1 + 3Z_3 does not preserve the ball 1 + 9Z_3 under multiplication.
  EXPECT_THROW(coset_count(set("ball(1, 2)", 3), 0, NamedSubgroup::principal_units()), NotInvariant);
}

TEST(Haar, Conversions) {
  const auto units = set("units", 5);
  EXPECT_EQ(convert(1, MeasureKind::Mult, MeasureKind::Add, units), Rational(4, 5));
  EXPECT_EQ(convert(Rational(3, 7), MeasureKind::Add, MeasureKind::Add, units), Rational(3, 7));
  EXPECT_EQ(convert(1, MeasureKind::Mult, MeasureKind::Add, set("sphere(1)", 5)), Rational(4, 25));
  EXPECT_THROW(convert(1, MeasureKind::Mult, MeasureKind::Add, set("ball(0, 0)", 5)), MixedSphere);
}

TEST(Haar, SphereSlicesSumToSetMass) {
  for (std::uint64_t p : {3, 5}) {
    const auto L = set("translate(units, -1)", p);
    Rational total = 0;
    for (long n = 0; n < 10; ++n) total += sphere_slice_measure(L, n);
    const Rational pr(static_cast<long long>(p));
    // Geometric tail beyond n = 9 is (1 - 1/p) p^-10 / (1 - 1/p).
    EXPECT_EQ(total + rpow(pr, -10), measure(L, MeasureKind::Add));
  }
}

TEST(HaarProperty, FiniteAdditivity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t p = 3;
    std::uniform_int_distribution<long> c(0, 26);
    long a = c(rng), b = c(rng);
    if (a % 9 == b % 9) b = (a + 1) % 27;
    const auto A = SetExpr::ball(a, 2);
    const auto B = SetExpr::ball(b, 2);
    const Rational sum = measure(CompactOpenSet(A, p), MeasureKind::Add) + measure(CompactOpenSet(B, p), MeasureKind::Add);
    EXPECT_EQ(measure(CompactOpenSet(SetExpr::unite(A, B), p), MeasureKind::Add), sum);
  }
}

TEST(HaarProperty, Invariances) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> shift(-50, 50);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t p = 5;
    const auto base = SetExpr::parse("union(sphere(1), ball(2, 3))");
    const Rational t = shift(rng);
    EXPECT_EQ(measure(CompactOpenSet(SetExpr::translate(base, t), p), MeasureKind::Add),
              measure(CompactOpenSet(base, p), MeasureKind::Add));
  }
}

TEST(HaarProperty, MembershipFollowsNormalForm) {
  const std::uint64_t p = 3;
  const auto s = set("translate(units, -1)", p);
  for (long x = -40; x <= 40; ++x) {
    const auto px = PadicNumber::from_rational(Rational(x), p, {8});
    if (px.is_zero()) continue;
    EXPECT_EQ(s.contains(px), ((x + 1) % 3 + 3) % 3 != 0) << x;
  }
}

TEST(Haar, GrammarRoundTrip) {
  for (const char* text : {"ball(0, 0)", "units", "one_plus_p", "sphere(2)", "translate(units, -1)",
                           "union(sphere(1), ball(2, 3))", "one_plus_p(2)"}) {
    const auto e = SetExpr::parse(text);
    EXPECT_EQ(SetExpr::parse(e.str()).str(), e.str());
  }
  EXPECT_THROW(SetExpr::parse("ball(0"), ParseError);
  EXPECT_THROW(set("units", 4), PreconditionViolation);
}
