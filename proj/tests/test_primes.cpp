#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgt/errors.hpp"
#include "qgt/primes.hpp"

#include <cmath>
#include <set>

using namespace qgt;

TEST(Primes, IsPrimeMatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) EXPECT_EQ(is_prime(n), oracle::trial_prime(n)) << n;
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Primes, SieveAndNextPrime) {
  EXPECT_EQ(sieve(30), (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
  EXPECT_EQ(next_prime(0), 2u);
  EXPECT_EQ(next_prime(14), 17u);
  EXPECT_EQ(next_prime(17), 17u);
}

TEST(Primes, AllPrimesFirst) {
  EXPECT_EQ(PrimeSubset::all_primes().first(1000), oracle::first_primes(1000));
}

TEST(Primes, ExplicitAndTail) {
  const auto s = PrimeSubset::all_primes().with_explicit({2, 7});
  EXPECT_EQ(s.first(5), (std::vector<std::uint64_t>{2, 7, 11, 13, 17}));
  EXPECT_EQ(s.str(), "explicit(2,7)+all_primes");
  const auto f = PrimeSubset::explicit_only({5, 3});
  EXPECT_TRUE(f.is_finite());
  EXPECT_EQ(f.first(10), (std::vector<std::uint64_t>{3, 5}));
  EXPECT_THROW(PrimeSubset::explicit_only({4}), PreconditionViolation);
}

TEST(Primes, ArithmeticProgression) {
  const auto members = PrimeSubset::arith_prog(1, 4).first(200);
  ASSERT_EQ(members.size(), 200u);
  std::uint64_t last = 0;
  for (auto p : members) {
    EXPECT_TRUE(oracle::trial_prime(p));
    EXPECT_EQ(p % 4, 1u);
    EXPECT_GT(p, last);
    last = p;
  }
  EXPECT_EQ(members[0], 5u);
  EXPECT_EQ(PrimeSubset::arith_prog(2, 4).first(5), (std::vector<std::uint64_t>{2}));
}

TEST(Primes, GrowthFamily) {
  const auto members = PrimeSubset::growth(2).first(50);
  ASSERT_EQ(members.size(), 50u);
  std::uint64_t last = 0;
  std::uint64_t n = 1;
  for (auto p : members) {
    EXPECT_TRUE(oracle::trial_prime(p));
    EXPECT_GT(p, last);
    last = p;
    // Member k is the first prime >= n^2 beyond the previous member.
    while (true) {
      std::uint64_t q = n * n;
      while (!oracle::trial_prime(q)) ++q;
      ++n;
      if (q == p) break;
      ASSERT_LT(q, p);
    }
  }
}

TEST(Primes, PairedFamily) {
  const auto s = PrimeSubset::paired(Rational(1, 2), 1000);
  const auto blocks = s.blocks(50);
  ASSERT_EQ(blocks.size(), 50u);
  std::set<std::uint64_t> used;
  for (const auto& b : blocks) {
    ASSERT_EQ(b.size(), 2u);
    const auto p = b[0], q = b[1];
    EXPECT_EQ(p % 4, 1u);
    EXPECT_EQ(q % 4, 3u);
    EXPECT_GE(p, 1000u);
    EXPECT_GE(q, 2 * p);
    EXPECT_TRUE(used.insert(p).second);
    EXPECT_TRUE(used.insert(q).second);
  }
  const auto zero = PrimeSubset::paired(0, 1000).blocks(10);
  for (const auto& b : zero) {
    // q >= p^(17/12).
    EXPECT_GE(std::pow(static_cast<double>(b[1]), 12), std::pow(static_cast<double>(b[0]), 17) * (1 - 1e-12));
  }
}

TEST(Primes, BlocksOfOtherFamilies) {
  const auto blocks = PrimeSubset::all_primes().blocks(3);
  EXPECT_EQ(blocks, (std::vector<std::vector<std::uint64_t>>{{2, 3}, {5, 7}, {11, 13}}));
}

TEST(Primes, ParseRoundTrip) {
  for (const char* text : {"all_primes", "growth(2)", "arith_prog(1,4)", "paired(1/2,100000)", "explicit(2,3,5)",
                           "explicit(2,3)+all_primes", "growth(3/2)"}) {
    EXPECT_EQ(PrimeSubset::parse(text).str(), text);
  }
  EXPECT_EQ(PrimeSubset::parse("explicit(2, 3) + all_primes"), PrimeSubset::parse("explicit(2,3)+all_primes"));
  EXPECT_THROW(PrimeSubset::parse("nope"), ParseError);
  EXPECT_THROW(PrimeSubset::parse("all_primes+growth(2)"), ParseError);
  EXPECT_THROW(PrimeSubset::parse("growth(2"), ParseError);
}
