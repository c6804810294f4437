// Copyright 2026 The modone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modone/numtheory.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"

namespace modone {
namespace {

std::vector<int64_t> quotients(const ContinuedFraction& cf) { return cf.partial_quotients; }

TEST(ContinuedFraction, Sqrt2) {
  auto cf = continued_fraction(ExtendedReal::parse("sqrt:2"), 6);
  EXPECT_EQ(quotients(cf), (std::vector<int64_t>{1, 2, 2, 2, 2, 2}));
}

TEST(ContinuedFraction, ExactRationalTerminates) {
  auto cf = continued_fraction(ExtendedReal::parse("7/3"), 3);
  EXPECT_EQ(quotients(cf), (std::vector<int64_t>{2, 3}));
  EXPECT_TRUE(cf.terminated);
  EXPECT_EQ(cf.convergents.back().p, 7);
  EXPECT_EQ(cf.convergents.back().q, 3);
}

// Oracle: Gauss map iterated in 100-digit decimal arithmetic.
std::vector<int64_t> oracle_quotients(oracle::Dec x, int depth) {
  std::vector<int64_t> out;
  for (int i = 0; i < depth; ++i) {
    oracle::Dec a = boost::multiprecision::floor(x);
    out.push_back(a.convert_to<int64_t>());
    x = 1 / (x - a);
  }
  return out;
}

TEST(ContinuedFraction, PiMatchesOracle) {
  auto cf = continued_fraction(ExtendedReal::parse("pi"), 4);
  EXPECT_EQ(quotients(cf), oracle_quotients(oracle::pi(), 4));
  EXPECT_EQ(quotients(cf), (std::vector<int64_t>{3, 7, 15, 1}));
  auto deep = continued_fraction(ExtendedReal::parse("pi"), 25);
  EXPECT_EQ(quotients(deep), oracle_quotients(oracle::pi(), 25));
}

TEST(ContinuedFraction, ConvergentInvariants) {
  for (const char* s : {"sqrt:2", "golden", "pi", "e", "sqrt:7"}) {
    ExtendedReal x = ExtendedReal::parse(s);
    auto cf = continued_fraction(x, 20);
    ASSERT_EQ(cf.partial_quotients.size(), cf.convergents.size());
    for (size_t k = 1; k < cf.convergents.size(); ++k) {
      const auto& c0 = cf.convergents[k - 1];
      const auto& c1 = cf.convergents[k];
      i128 det = static_cast<i128>(c1.p) * c0.q - static_cast<i128>(c0.p) * c1.q;
      EXPECT_EQ(static_cast<int64_t>(det), (k % 2 == 1) ? 1 : -1) << s << " k=" << k;
      if (k >= 2) EXPECT_GT(c1.q, c0.q) << s;
      BigFloat diff = abs(x.big() - BigFloat(c1.p) / BigFloat(c1.q));
      EXPECT_LT(diff, 1 / (BigFloat(c1.q) * BigFloat(c1.q))) << s;
    }
  }
}

TEST(ContinuedFraction, LowPrecisionReportsExhaustion) {
  ExtendedReal x = ExtendedReal::parse("sqrt:2", 10);
  EXPECT_THROW(continued_fraction(x, 60), PrecisionExhausted);
  EXPECT_THROW(continued_fraction(x, 0), InputError);
}

// Oracle: the same least-squares estimator on 100-digit decimal convergents.
double oracle_kappa(const oracle::Dec& x, int64_t q_max) {
  oracle::Dec y = x;
  int64_t p0 = 1, q0 = 0;
  int64_t a = boost::multiprecision::floor(y).convert_to<int64_t>();
  int64_t p1 = a, q1 = 1;
  y -= a;
  std::vector<double> lx, ly;
  for (;;) {
    y = 1 / y;
    a = boost::multiprecision::floor(y).convert_to<int64_t>();
    y -= a;
    int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > q_max) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (q1 < 2) continue;
    oracle::Dec err = abs(x - oracle::Dec(p1) / q1);
    lx.push_back(std::log(static_cast<double>(q1)));
    ly.push_back(-boost::multiprecision::log(err).convert_to<double>());
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
  mx /= lx.size(); my /= ly.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return std::max(2.0, sxy / sxx);
}

TEST(DiophantineType, QuadraticSurdsHaveTypeTwo) {
  double k2 = diophantine_type_estimate(ExtendedReal::parse("sqrt:2"), 10000);
  EXPECT_GE(k2, 2.0);
  EXPECT_LE(k2, 2.1);
  double kg = diophantine_type_estimate(ExtendedReal::parse("golden"), 10000);
  EXPECT_GE(kg, 2.0);
  EXPECT_LE(kg, 2.1);
  EXPECT_NEAR(k2, oracle_kappa(oracle::sqrt2(), 10000), 1e-9);
  EXPECT_NEAR(kg, oracle_kappa(oracle::golden(), 10000), 1e-9);
}

TEST(DiophantineType, LiouvilleTruncationIsWellAboveTwo) {
  oracle::Dec x = oracle::Dec("0.1") + oracle::Dec("0.01") + oracle::Dec("1e-6") + oracle::Dec("1e-24");
  double expect = oracle_kappa(x, 1000000);
  double got = diophantine_type_estimate(ExtendedReal::parse("liouville:4"), 1000000);
  EXPECT_NEAR(got, expect, 1e-9);
  EXPECT_NEAR(got, 3.33037, 1e-4);
  auto details = diophantine_type_details(ExtendedReal::parse("liouville:4"), 1000000);
  EXPECT_NEAR(details.max_ratio, 4.0, 1e-3);
}

TEST(DiophantineType, RationalIsRejected) {
  EXPECT_THROW(diophantine_type_estimate(ExtendedReal::parse("3/7"), 100), InputError);
}

TEST(Bezout, SpecifiedRepresentatives) {
  auto s1 = bezout_with_parity(1, 2, Parity::b_even);
  EXPECT_EQ(s1.a, -1);
  EXPECT_EQ(s1.b, 0);
  auto s2 = bezout_with_parity(3, 5, Parity::a_even);
  EXPECT_EQ(s2.a, -2);
  EXPECT_EQ(s2.b, 1);
  auto s3 = bezout_with_parity(3, 4, Parity::b_even);
  EXPECT_EQ(s3.a, -3);
  EXPECT_EQ(s3.b, 2);
  // The alternative representative (5, -4) solves the same constraint.
  EXPECT_TRUE(is_valid_bezout(5, -4, 3, 4, Parity::b_even));
  EXPECT_FALSE(is_valid_bezout(1, -1, 3, 4, Parity::b_even));
  EXPECT_FALSE(is_valid_bezout(3, -2, 3, 5, Parity::a_even));
}

TEST(Bezout, ImpossibleCasesAreRejected) {
  EXPECT_THROW(bezout_with_parity(2, 3, Parity::b_even), InputError);
  EXPECT_THROW(bezout_with_parity(3, 4, Parity::a_even), InputError);
  EXPECT_THROW(bezout_with_parity(4, 6, Parity::b_even), InputError);
  EXPECT_THROW(bezout_with_parity(1, 0, Parity::b_even), InputError);
}

TEST(Bezout, RandomCoprimePairsSatisfyIdentity) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 10000) {
    int64_t k = static_cast<int64_t>(rng() % 2'000'001) - 1'000'000;
    int64_t n = 1 + static_cast<int64_t>(rng() % 1'000'000);
    if (std::gcd(k, n) != 1) continue;
    Parity p = (rng() & 1) ? Parity::b_even : Parity::a_even;
    if (p == Parity::b_even && k % 2 == 0) p = Parity::a_even;
    if (p == Parity::a_even && n % 2 == 0) p = Parity::b_even;
    if (p == Parity::b_even && k % 2 == 0) continue;
    auto s = bezout_with_parity(k, n, p);
    ASSERT_TRUE(is_valid_bezout(s.a, s.b, k, n, p)) << k << " " << n;
    EXPECT_LE(std::abs(s.a), 2 * n);
    ++checked;
  }
}

TEST(Bezout, MinimalityAgainstExhaustiveSearch) {
  for (int64_t n = 1; n <= 30; ++n) {
    for (int64_t k = -30; k <= 30; ++k) {
      if (std::gcd(k, n) != 1) continue;
      for (Parity p : {Parity::b_even, Parity::a_even}) {
        bool possible = p == Parity::b_even ? (k % 2 != 0) : (n % 2 != 0);
        if (!possible) {
          EXPECT_THROW(bezout_with_parity(k, n, p), InputError);
          continue;
        }
        int64_t best = INT64_MAX;
        for (int64_t a = -2 * n; a <= 2 * n; ++a) {
          if ((-1 - a * k) % n != 0) continue;
          int64_t b = (-1 - a * k) / n;
          if (!is_valid_bezout(a, b, k, n, p)) continue;
          if (best == INT64_MAX || std::abs(a) < std::abs(best) ||
              (std::abs(a) == std::abs(best) && a > best))
            best = a;
        }
        ASSERT_NE(best, INT64_MAX);
        EXPECT_EQ(bezout_with_parity(k, n, p).a, best) << k << " " << n;
      }
    }
  }
}

std::vector<FareyPair> brute_band(double M, double v0, double v1, double L) {
  std::vector<FareyPair> out;
  for (int64_t c = 1; c <= 4 * static_cast<int64_t>(M) + 4; ++c) {
    double v = M / c;
    if (v < v0 || v > v1) continue;
    for (int64_t d = -static_cast<int64_t>(L * c) - 1; d <= static_cast<int64_t>(L * c) + 1; ++d) {
      if (std::abs(static_cast<double>(d)) > L * c) continue;
      if (std::gcd(c, d) == 1) out.push_back({c, d});
    }
  }
  return out;
}

TEST(FareyBand, Examples) {
  auto b1 = farey_band(10, 5, 10, 1);
  std::set<int64_t> cs;
  for (auto& p : b1) cs.insert(p.c);
  EXPECT_EQ(cs, (std::set<int64_t>{1, 2}));
  EXPECT_EQ(b1, brute_band(10, 5, 10, 1));
  EXPECT_TRUE(farey_band(1, 2, 3, 1).empty());
  auto b3 = farey_band(10, 0.25, 1, 1);
  EXPECT_EQ(b3.front().c, 10);
  EXPECT_EQ(b3.back().c, 40);
  EXPECT_EQ(b3, brute_band(10, 0.25, 1, 1));
}

TEST(FareyBand, MatchesBruteForceForSmallM) {
  for (int M = 1; M <= 50; ++M) {
    EXPECT_EQ(farey_band(M, 0.25, 1, 1), brute_band(M, 0.25, 1, 1)) << M;
    EXPECT_EQ(farey_band(M, 0.5, 3, 2.5), brute_band(M, 0.5, 3, 2.5)) << M;
  }
  EXPECT_EQ(farey_band(7.3, 0.3, 1.7, 1.5), brute_band(7.3, 0.3, 1.7, 1.5));
}

TEST(FareyBand, RejectsBadParameters) {
  EXPECT_THROW(farey_band(10, 0.1, 1, 1), InputError);
  EXPECT_THROW(farey_band(10, 1, 1, 1), InputError);
  EXPECT_THROW(farey_band(10, 0.5, 1, 0.5), InputError);
  EXPECT_THROW(farey_band(0, 0.5, 1, 1), InputError);
}

TEST(Arithmetic, DivisorAndTotient) {
  EXPECT_EQ(divisor_count(12), 6);
  EXPECT_EQ(euler_phi(10), 4);
  EXPECT_EQ(divisor_count(5040), 60);
  EXPECT_EQ(divisor_count(1), 1);
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(5003), 5002);
  for (int64_t n = 1; n <= 500; ++n) {
    int64_t tau = 0, phi = 0;
    for (int64_t d = 1; d <= n; ++d) {
      if (n % d == 0) ++tau;
      if (std::gcd(n, d) == 1) ++phi;
    }
    EXPECT_EQ(divisor_count(n), tau);
    EXPECT_EQ(euler_phi(n), phi);
    EXPECT_EQ(static_cast<int64_t>(divisors(n).size()), tau);
  }
  EXPECT_THROW(divisor_count(0), InputError);
}

TEST(Arithmetic, ModInverse) {
  for (int64_t n = 2; n < 60; ++n)
    for (int64_t k = -40; k < 40; ++k)
      if (std::gcd(k, n) == 1) EXPECT_EQ(mod_floor(mod_inverse(k, n) * k, n), 1);
}

}  // namespace
}  // namespace modone
