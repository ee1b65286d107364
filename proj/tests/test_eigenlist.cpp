#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgt/eigenlist.hpp"
#include "qgt/errors.hpp"
#include "qgt/itpfi_spec.hpp"

#include <cmath>

using namespace qgt;

namespace {

CompactOpenSet set(const char* text, std::uint64_t p) { return CompactOpenSet::parse(text, p); }

double d(const Real& r) { return r.to_double(); }

// Compares the first levels of a list against (value, multiplicity) pairs.
void expect_levels(const EigenvalueList& list, const std::vector<std::pair<double, std::uint64_t>>& want) {
  const auto got = list.levels(want.size());
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(d(got[i].value), want[i].first, 1e-15 * want[i].first) << "level " << i;
    EXPECT_EQ(got[i].multiplicity, want[i].second) << "level " << i;
  }
}

}  // namespace

TEST(Eigenlist, UnitsCornerMatchesOrbitOracle) {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    const auto list = corner_list(set("units", p), set("ball(0, 0)", p), MeasureKind::Mult, MeasureKind::Add);
    EXPECT_EQ(list, EigenvalueList::units_corner(p));
    std::vector<std::pair<double, std::uint64_t>> want;
    for (unsigned n = 0; n < 5; ++n) {
      const double value = (1 - 1.0 / p) * std::pow(p, -static_cast<double>(n));
      want.emplace_back(value, oracle::orbit_count(p, n, 0, oracle::integers()));
    }
    expect_levels(list, want);
    EXPECT_TRUE(list.is_exact());
    EXPECT_EQ(list.mass().exact(), 1);
  }
}

TEST(Eigenlist, DualCornerMatchesOrbitOracle) {
  for (std::uint64_t p : {3, 5, 7}) {
    const auto list =
        corner_list(set("one_plus_p", p), set("translate(units, -1)", p), MeasureKind::Mu, MeasureKind::Nu);
    EXPECT_EQ(list, EigenvalueList::dual_corner(p));
    std::vector<std::pair<double, std::uint64_t>> want;
    for (unsigned n = 0; n < 4; ++n) {
      // mu+(1 + pZ_p) / mu+(Z_p^* - 1) = (1/p) / (1 - 1/p).
      const double value = 1.0 / (p - 1) * std::pow(p, -static_cast<double>(n));
      want.emplace_back(value, oracle::orbit_count(p, n, 1, oracle::units_minus_one(p)));
    }
    expect_levels(list, want);
    EXPECT_EQ(list.mass().exact(), 1);
  }
}

TEST(Eigenlist, DualCornerAtTwoHasNoHead) {
  const auto list = EigenvalueList::dual_corner(2);
  EXPECT_TRUE(list.head().empty());
  expect_levels(list, {{0.5, 1}, {0.25, 1}, {0.125, 1}});
}

TEST(Eigenlist, SelfDualCornerMatchesOrbitOracle) {
  for (std::uint64_t p : {2, 3, 5}) {
    const auto list = corner_list(set("one_plus_p", p), set("ball(0, 0)", p), MeasureKind::Mu, MeasureKind::Add);
    EXPECT_EQ(list, EigenvalueList::selfdual_corner(p));
    std::vector<std::pair<double, std::uint64_t>> want;
    for (unsigned n = 0; n < 4; ++n) {
      want.emplace_back(std::pow(p, -static_cast<double>(n + 1)), oracle::orbit_count(p, n, 1, oracle::integers()));
    }
    expect_levels(list, want);
  }
}

TEST(Eigenlist, CornerPreconditions) {
  EXPECT_THROW(corner_list(set("units", 3), set("ball(0, 0)", 3), MeasureKind::Add, MeasureKind::Add),
               NotNormalized);
  EXPECT_THROW(corner_list(set("units", 3), set("ball(0, 0)", 5), MeasureKind::Mult, MeasureKind::Add),
               PrimeMismatch);
  EXPECT_THROW(corner_list(set("ball(0, 0)", 3), set("ball(0, 0)", 3), MeasureKind::Add, MeasureKind::Add),
               PreconditionViolation);
}

TEST(Eigenlist, BocaValues) {
  for (std::uint64_t p : {2, 5, 13}) {
    for (double beta : {1.0, 0.5, 0.25}) {
      const auto list = EigenvalueList::boca(p, parse_rational(std::to_string(beta)));
      const auto levels = list.levels(6);
      for (unsigned n = 0; n < 6; ++n) {
        EXPECT_NEAR(d(levels[n].value), oracle::boca_value(p, beta, n), 1e-14);
      }
      EXPECT_TRUE(list.mass_is_one());
    }
  }
  EXPECT_THROW(EigenvalueList::boca(4, 1), PreconditionViolation);
  EXPECT_THROW(EigenvalueList::boca(3, 2), PreconditionViolation);
}

TEST(Eigenlist, PowersAndUniform) {
  const auto pw = EigenvalueList::powers(Rational(1, 3));
  expect_levels(pw, {{0.75, 1}, {0.25, 1}});
  EXPECT_EQ(pw.level_count(), 2u);
  const auto u = EigenvalueList::uniform(4);
  expect_levels(u, {{0.25, 4}});
  EXPECT_EQ(u.mass().exact(), 1);
  EXPECT_THROW(EigenvalueList::powers(0), PreconditionViolation);
  EXPECT_THROW(EigenvalueList::uniform(0), PreconditionViolation);
}

TEST(Eigenlist, TensorOfFiniteLists) {
  const auto t = tensor_exact(EigenvalueList::powers(Rational(1, 2)), EigenvalueList::powers(Rational(1, 2)));
  // {2/3, 1/3} x {2/3, 1/3} = {4/9, 2/9 (x2), 1/9}.
  expect_levels(t, {{4.0 / 9, 1}, {2.0 / 9, 2}, {1.0 / 9, 1}});
  EXPECT_EQ(t.mass().exact(), 1);
  EXPECT_FALSE(t.is_truncated());
}

TEST(Eigenlist, TensorWithTail) {
  const auto t = tensor_exact(EigenvalueList::units_corner(3), EigenvalueList::uniform(2));
  expect_levels(t, {{1.0 / 3, 2}, {1.0 / 9, 2}, {1.0 / 27, 2}});
  EXPECT_EQ(t.mass().exact(), 1);
}

TEST(Eigenlist, TensorOfTwoTailsTruncates) {
  const auto a = EigenvalueList::units_corner(2);
  const auto b = EigenvalueList::units_corner(3);
  EXPECT_THROW(tensor_exact(a, b), TailBlowup);
  const auto t = tensor(a, b, 8);
  EXPECT_TRUE(t.is_truncated());
  EXPECT_NEAR(d(t.mass()), 1.0, 1e-12);
  // Top value (1/2)(2/3).
  EXPECT_NEAR(d(t.top().value), 1.0 / 3, 1e-15);
}

TEST(Eigenlist, DualCornerMinusOneCopy) {
  for (std::uint64_t p : {3, 5, 7, 11}) {
    const EigenvalueList copy({}, GeometricTail{Real(Rational(1, p)), {{Real(Rational(1, p * (p - 1))), 1}}});
    const auto reduced = remove_sublist(EigenvalueList::dual_corner(p), copy);
    EXPECT_EQ(reduced, tensor_exact(EigenvalueList::units_corner(p), EigenvalueList::uniform(p - 2)));
  }
}

TEST(Eigenlist, RemoveMissingSublist) {
  const EigenvalueList copy({{Real(Rational(1, 2)), 1}});
  EXPECT_THROW(remove_sublist(EigenvalueList::uniform(3), copy), PreconditionViolation);
}

TEST(Eigenlist, SelfDualIsBocaTensorUniform) {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    EXPECT_EQ(EigenvalueList::selfdual_corner(p),
              tensor_exact(EigenvalueList::boca(p, 1), EigenvalueList::uniform(p - 1)));
  }
}

TEST(Eigenlist, TopLevels) {
  const auto list = EigenvalueList::units_corner(3);
  const auto top = list.top_levels(2);
  // 2/3 and 2/9 renormalized by 8/9.
  expect_levels(top, {{0.75, 1}, {0.25, 1}});
  EXPECT_EQ(list.mass_of_top_levels(2).exact(), Rational(8, 9));
}

TEST(Eigenlist, CsvAndJson) {
  const auto list = EigenvalueList::powers(Rational(1, 3));
  EXPECT_EQ(to_csv(list, 4), "level,value,multiplicity\n0,3/4,1\n1,1/4,1\n");
  const auto j = to_json(EigenvalueList::units_corner(5), 3);
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_EQ(j["tail"]["ratio"], "1/5");
  EXPECT_EQ(j["mass"], "1");
}

TEST(Spec, RuleListsMatchClosedForms) {
  EXPECT_EQ(exact_list(ListRule::units_corner(), 5), EigenvalueList::units_corner(5));
  EXPECT_EQ(exact_list(ListRule::dual_corner(), 5), EigenvalueList::dual_corner(5));
  EXPECT_EQ(exact_list(ListRule::selfdual_corner(), 5), EigenvalueList::selfdual_corner(5));
  EXPECT_EQ(exact_list(ListRule::uniform_affine(1, -2), 7), EigenvalueList::uniform(5));
  const auto generic = ListRule::corner_rule("one_plus_p(2)", "ball(0, 0)", MeasureKind::Add, MeasureKind::Add);
  EXPECT_THROW(exact_list(generic, 3), NotNormalized);
}

TEST(Spec, NumericLevelsAgreeWithExact) {
  const auto rule = ListRule::tensor({ListRule::boca(1), ListRule::uniform_affine(1, -2)});
  NumericLevels levels;
  numeric_levels(rule, 11, 5, levels);
  ASSERT_EQ(levels.size(), 5u);
  for (unsigned n = 0; n < 5; ++n) {
    EXPECT_NEAR(levels[n].first, oracle::boca_value(11, 1, n) / 9, 1e-15);
    EXPECT_EQ(levels[n].second, 9);
  }
}

TEST(Spec, CornerReduce) {
  ITPFISpec spec;
  spec.subset = PrimeSubset::all_primes();
  spec.rule = ListRule::units_corner();
  // Removed mass p^-m is summable for m >= 2 and not for m = 1.
  const auto reduced = corner_reduce(spec, 2);
  EXPECT_EQ(reduced.rule.kind, ListRule::Kind::TopLevels);
  ASSERT_EQ(reduced.certificates.size(), 1u);
  EXPECT_TRUE(reduced.certificates[0].verdict.converges());
  EXPECT_THROW(corner_reduce(spec, 1), NullProjection);
  const auto list = reduced.list_at(3);
  expect_levels(list, {{0.75, 1}, {0.25, 1}});
}

TEST(Spec, RemoveSummableCopies) {
  ITPFISpec spec;
  spec.subset = PrimeSubset::all_primes();
  spec.rule = ListRule::dual_corner();
  const auto out = remove_summable_copies(spec);
  EXPECT_EQ(out.rule, ListRule::tensor({ListRule::boca(1), ListRule::uniform_affine(1, -2)}));
  ASSERT_EQ(out.certificates.size(), 1u);
  EXPECT_TRUE(out.certificates[0].verdict.converges());
  spec.rule = ListRule::units_corner();
  EXPECT_EQ(remove_summable_copies(spec).rule, spec.rule);
  EXPECT_THROW(remove_summable_copies(spec, CopyKind::TopLevel), NullProjection);
}

TEST(Spec, JsonRoundTrip) {
  const auto j = nlohmann::json::parse(R"({
    "subset": "explicit(2,3)+all_primes",
    "rule": {"kind": "tensor", "factors": [{"kind": "boca", "beta": "1/2"}, {"kind": "uniform", "k": "p-1"}]},
    "truncation": {"primes": 200, "levels": 16}
  })");
  const auto spec = spec_from_json(j);
  EXPECT_EQ(spec.truncation.primes, 200u);
  EXPECT_EQ(spec.rule.factors.size(), 2u);
  const auto again = spec_from_json(to_json(spec));
  EXPECT_EQ(again.rule, spec.rule);
  EXPECT_EQ(again.subset, spec.subset);
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"subset": "all_primes", "rule": {"kind": "nope"}})")),
               ParseError);
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"rule": {"kind": "boca", "beta": 1}})")), ParseError);
}

TEST(EigenlistProperty, TensorIsMassPreservingAndCommutative) {
  const std::vector<EigenvalueList> lists = {
      EigenvalueList::uniform(3), EigenvalueList::powers(Rational(2, 7)), EigenvalueList::units_corner(5),
      EigenvalueList::dual_corner(3), EigenvalueList::boca(7, Rational(1, 2))};
  for (const auto& a : lists) {
    for (const auto& b : lists) {
      if (a.tail() && b.tail()) continue;
      const auto ab = tensor_exact(a, b);
      const auto ba = tensor_exact(b, a);
      EXPECT_TRUE(ab.mass_is_one());
      const auto la = ab.levels(6);
      const auto lb = ba.levels(6);
      ASSERT_EQ(la.size(), lb.size());
      for (std::size_t i = 0; i < la.size(); ++i) {
        EXPECT_TRUE(la[i].value.same_as(lb[i].value));
        EXPECT_EQ(la[i].multiplicity, lb[i].multiplicity);
      }
    }
  }
}
