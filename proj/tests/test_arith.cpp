#include <gtest/gtest.h>

#include <random>

#include "lambda_transfer/arith.hpp"

using namespace lambda_transfer;

namespace {

bool naive_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Legendre symbol by Euler's criterion.
int euler_legendre(std::int64_t a, std::int64_t p) {
  auto r = pow_mod(mod(a, p), (p - 1) / 2, p);
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

}  // namespace

TEST(Factorize, SmallValues) {
  auto f = factorize(817);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, 19);
  EXPECT_EQ(f.factors[0].second, 1u);
  EXPECT_EQ(f.factors[1].first, 43);
  EXPECT_EQ(f.factors[1].second, 1u);
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_THROW(factorize(0), ArithmeticError);
}

TEST(Factorize, ExhaustiveUpToTenThousand) {
  for (std::int64_t n = 1; n <= 10'000; ++n) {
    auto f = factorize(n);
    ASSERT_EQ(f.product(), n) << n;
    BigInt prev = 1;
    for (const auto& [q, e] : f.factors) {
      ASSERT_TRUE(naive_prime(static_cast<std::int64_t>(q))) << n;
      ASSERT_GT(q, prev);
      ASSERT_GE(e, 1u);
      prev = q;
    }
  }
}

TEST(Factorize, LargeSemiprimes) {
  const BigInt p = BigInt("1000000007"), q = BigInt("998244353");
  auto f = factorize(p * q);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, q);
  EXPECT_EQ(f.factors[1].first, p);

  const BigInt r = BigInt("18446744073709551557");  // largest prime below 2^64
  auto g = factorize(r * r * 6);
  EXPECT_EQ(g.product(), r * r * 6);
  EXPECT_EQ(g.exponent_of(r), 2u);

  const BigInt big = BigInt("170141183460469231731687303715884105727");  // 2^127 - 1
  EXPECT_TRUE(is_prime(big));
  EXPECT_FALSE(is_prime(big * 3));
}

TEST(Primality, AgreesWithTrialDivision) {
  for (std::int64_t n = -5; n < 20'000; ++n) ASSERT_EQ(is_prime(n), naive_prime(n)) << n;
  // strong pseudoprimes to several small bases
  for (std::int64_t n : {2047LL, 1373653LL, 25326001LL, 3215031751LL, 2152302898747LL, 3474749660383LL,
                         341550071728321LL, 3825123056546413051LL})
    EXPECT_FALSE(is_prime(n)) << n;
}

TEST(EulerPhi, Values) {
  EXPECT_EQ(euler_phi(817), 756);
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(19), 18);
  for (std::int64_t n = 1; n <= 500; ++n) {
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n; ++k) count += std::gcd(k, n) == 1;
    ASSERT_EQ(euler_phi(n), count) << n;
  }
}

TEST(Kronecker, KnownValues) {
  EXPECT_EQ(kronecker(-51, 5), 1);
  EXPECT_EQ(kronecker(-51, 19), 1);
  EXPECT_EQ(kronecker(-51, 43), 1);
  EXPECT_EQ(kronecker(-51, 3), 0);
  EXPECT_EQ(kronecker(-51, 17), 0);
  EXPECT_EQ(kronecker(-51, 7), -1);
  EXPECT_EQ(kronecker(-51, 2), -1);  // -51 = 5 mod 8
  EXPECT_EQ(kronecker(-23, 2), 1);   // -23 = 1 mod 8
}

TEST(Kronecker, LegendreAgreementOddPrimes) {
  std::mt19937_64 rng(20261015);
  std::uniform_int_distribution<std::int64_t> dist(-1'000'000, 1'000'000);
  for (auto p : primes_up_to(10'000)) {
    if (p == 2) continue;
    for (int i = 0; i < 8; ++i) {
      auto a = dist(rng);
      ASSERT_EQ(kronecker(a, p), euler_legendre(a, p)) << a << " " << p;
    }
    ASSERT_EQ(kronecker(-51, p), euler_legendre(-51, p)) << p;
  }
}

TEST(Kronecker, Multiplicativity) {
  for (std::int64_t a = -60; a <= 60; ++a)
    for (std::int64_t m = 1; m <= 40; ++m)
      for (std::int64_t n = 1; n <= 40; ++n) {
        ASSERT_EQ(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n)) << a << " " << m << " " << n;
      }
  for (std::int64_t a = -40; a <= 40; ++a)
    for (std::int64_t b = -40; b <= 40; ++b)
      for (std::int64_t n : {3, 5, 15, 21, 43, 817})
        ASSERT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
}

TEST(ModArith, InverseAndPower) {
  EXPECT_EQ(inverse_mod(43, 5), 2);
  EXPECT_EQ(inverse_mod(19, 5), 4);
  EXPECT_THROW(inverse_mod(10, 5), ArithmeticError);
  EXPECT_EQ(pow_mod(3, 200, 1000003), boost::multiprecision::powm(BigInt(3), 200, BigInt(1000003)));
  EXPECT_EQ(valuation(BigInt(-952105), 5), 1u);
  EXPECT_EQ(isqrt(BigInt(1849)), 43);
  EXPECT_EQ(isqrt(BigInt(1848)), 42);
}

TEST(RootMultiplicity, EulerFactorExamples) {
  EXPECT_EQ(root_multiplicity(PolyModP(5, {1, 1, 3}), 2), 1u);
  EXPECT_EQ(root_multiplicity(PolyModP(5, {1, -1}), 4), 0u);
  EXPECT_EQ(root_multiplicity(PolyModP(5, {1, -1}), 2), 0u);
  // (X - 1)^3 (X + 1) over F_7
  PolyModP f = PolyModP(7, {-1, 1}) * PolyModP(7, {-1, 1}) * PolyModP(7, {-1, 1}) * PolyModP(7, {1, 1});
  EXPECT_EQ(root_multiplicity(f, 1), 3u);
  EXPECT_EQ(root_multiplicity(f, 6), 1u);
  EXPECT_EQ(root_multiplicity(f, 3), 0u);
  EXPECT_THROW(root_multiplicity(PolyModP(5, {}), 1), ArithmeticError);
}

TEST(RootMultiplicity, AgreesWithRepeatedDivision) {
  std::mt19937 rng(7);
  for (auto p : {2, 3, 5, 7, 11, 13}) {
    std::uniform_int_distribution<std::int64_t> c(0, p - 1);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::int64_t> coeffs(1 + trial % 6);
      for (auto& x : coeffs) x = c(rng);
      coeffs.back() = 1;
      PolyModP f(p, coeffs);
      for (std::int64_t x0 = 0; x0 < p; ++x0) {
        unsigned naive = 0;
        PolyModP g = f;
        while (g.degree() >= 1 && g.eval(x0) == 0) {
          g = g.divide_linear(x0).first;
          ++naive;
        }
        ASSERT_EQ(root_multiplicity(f, x0), naive);
      }
      int roots = 0;
      for (std::int64_t x0 = 0; x0 < p; ++x0) roots += f.eval(x0) == 0;
      ASSERT_EQ(count_distinct_roots(f), roots);
    }
  }
}
