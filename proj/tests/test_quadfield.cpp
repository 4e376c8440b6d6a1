#include <gtest/gtest.h>

#include <random>

#include "lambda_transfer/quadfield.hpp"

using namespace lambda_transfer;

namespace {

bool squarefree(std::int64_t n) {
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

bool fundamental(std::int64_t d) {
  if (mod(d, 4) == 1) return squarefree(-d);
  if (mod(d, 4) != 0) return false;
  std::int64_t m = d / 4;
  return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(-m);
}

// Dirichlet's class number formula for d < 0: h = -(w / 2|d|) sum_{a=1}^{|d|} chi_d(a) a.
std::int64_t analytic_class_number(std::int64_t d) {
  const std::int64_t w = d == -3 ? 6 : (d == -4 ? 4 : 2);
  std::int64_t s = 0;
  for (std::int64_t a = 1; a < -d; ++a) s += kronecker(d, a) * a;
  return -w * s / (2 * -d);
}

}  // namespace

TEST(ClassNumber, KnownValues) {
  EXPECT_EQ(class_number(-51), 2);
  EXPECT_EQ(class_number(-3), 1);
  EXPECT_EQ(class_number(-4), 1);
  EXPECT_EQ(class_number(-23), 3);
  EXPECT_EQ(class_number(-163), 1);
  EXPECT_EQ(class_number(-20), 2);
  EXPECT_THROW(class_number(5), FieldError);
  EXPECT_THROW(class_number(-6), FieldError);
}

TEST(ClassNumber, AnalyticFormulaFundamentalDiscriminantsToMinus500) {
  int checked = 0;
  for (std::int64_t d = -3; d >= -500; --d) {
    if (!fundamental(d)) continue;
    ASSERT_EQ(class_number(d), analytic_class_number(d)) << d;
    ++checked;
  }
  EXPECT_GT(checked, 140);
}

TEST(Field, Basics) {
  ImagQuadField K(51);
  EXPECT_EQ(K.disc(), -51);
  EXPECT_EQ(K.class_number(), 2);
  EXPECT_EQ(K.omega_norm(), 13);
  EXPECT_EQ(ImagQuadField(5).disc(), -20);
  EXPECT_THROW(ImagQuadField(12), FieldError);
  EXPECT_THROW(ImagQuadField(0), FieldError);
  EXPECT_THROW(quadint_pow({1, 1}, 2, ImagQuadField(5)), FieldError);
}

TEST(Field, SplittingTypes) {
  ImagQuadField K(51);
  EXPECT_EQ(K.splitting_type(5), Splitting::split);
  EXPECT_EQ(K.splitting_type(19), Splitting::split);
  EXPECT_EQ(K.splitting_type(43), Splitting::split);
  EXPECT_EQ(K.splitting_type(3), Splitting::ramified);
  EXPECT_EQ(K.splitting_type(17), Splitting::ramified);
  EXPECT_EQ(K.splitting_type(7), Splitting::inert);
  EXPECT_EQ(K.splitting_type(2), Splitting::inert);
}

TEST(Field, RamifiedExactlyAtDiscriminantPrimes) {
  for (std::int64_t D : {1, 2, 3, 5, 7, 11, 15, 19, 23, 43, 51, 67, 163, 210}) {
    ImagQuadField K(D);
    for (auto ell : primes_up_to(300)) {
      const bool ramified = K.splitting_type(ell) == Splitting::ramified;
      ASSERT_EQ(ramified, K.disc() % ell == 0) << D << " " << ell;
    }
  }
}

TEST(Field, SplitPrimesAreNorms) {
  // for h_K = 1 every split prime is a norm of an element of Z[omega]
  for (std::int64_t D : {3, 7, 11, 19, 43, 67, 163}) {
    ImagQuadField K(D);
    for (auto ell : primes_up_to(200)) {
      if (K.splitting_type(ell) != Splitting::split) continue;
      auto [a, b] = norm_form_representation(K, ell);
      ASSERT_EQ(K.norm({a, b}), ell);
    }
  }
}

TEST(Arithmetic, BrinkPowers) {
  ImagQuadField K(51);
  QuadInt z{12, 11};
  EXPECT_EQ(K.norm(z), 1849);
  QuadInt z2 = quadint_pow(z, 2, K);
  EXPECT_EQ(z2, (QuadInt{-1429, 385}));
  QuadInt z4 = quadint_pow(z, 4, K);
  EXPECT_EQ(z4, (QuadInt{115116, -952105}));
  EXPECT_EQ(quadint_pow(z, 0, K), (QuadInt{1, 0}));
  EXPECT_EQ(K.mul(z, K.conj(z)), (QuadInt{1849, 0}));
}

TEST(Arithmetic, NormMultiplicativity) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<std::int64_t> dist(-100'000, 100'000);
  std::uniform_int_distribution<std::int64_t> field(0, 6);
  const std::int64_t Ds[] = {3, 7, 11, 15, 19, 51, 163};
  for (int i = 0; i < 10'000; ++i) {
    ImagQuadField K(Ds[field(rng)]);
    QuadInt z{dist(rng), dist(rng)}, w{dist(rng), dist(rng)};
    ASSERT_EQ(K.norm(K.mul(z, w)), K.norm(z) * K.norm(w));
  }
}

TEST(Arithmetic, PowerAdditivity) {
  ImagQuadField K(51);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> dist(-50, 50);
  for (int i = 0; i < 200; ++i) {
    QuadInt z{dist(rng), dist(rng)};
    for (unsigned m = 0; m < 6; ++m)
      for (unsigned n = 0; n < 6; ++n)
        ASSERT_EQ(K.mul(quadint_pow(z, m, K), quadint_pow(z, n, K)), quadint_pow(z, m + n, K));
  }
}

TEST(NormForm, RepresentationOf43Squared) {
  ImagQuadField K(51);
  EXPECT_EQ(norm_form_representation(K, 1849), (std::pair<BigInt, BigInt>{12, 11}));
  EXPECT_EQ(norm_form_representation(K, 1849, 5), (std::pair<BigInt, BigInt>{12, 11}));
  auto r19 = norm_form_representation(K, 361, 5);
  EXPECT_EQ(K.norm({r19.first, r19.second}), 361);
  EXPECT_EQ(norm_form_representation(K, 43), (std::pair<BigInt, BigInt>{5, 1}));
  EXPECT_THROW(norm_form_representation(K, 5), NoRepresentation);  // 5 splits into non-principal ideals
  EXPECT_THROW(norm_form_representation(K, 7), NoRepresentation);
}

TEST(NormForm, RepresentationsAreValidAndPrimitive) {
  ImagQuadField K(51);
  for (BigInt n = 1; n < 3000; ++n) {
    try {
      auto [a, b] = norm_form_representation(K, n);
      ASSERT_EQ(K.norm({a, b}), n);
      ASSERT_EQ(boost::multiprecision::gcd(a, b), 1);
    } catch (const NoRepresentation&) {
      // brute force: no primitive solution with |b| <= 2 sqrt(n / 51) + 1
      for (std::int64_t b = -20; b <= 20; ++b)
        for (std::int64_t a = -120; a <= 120; ++a)
          if (std::gcd(a, b) == 1) ASSERT_NE(K.norm({a, b}), n);
    }
  }
}

TEST(Brink, SEllAt43And19) {
  ImagQuadField K(51);
  auto b43 = brink_s_ell(K, 43, 5);
  EXPECT_EQ(b43.target, 1849);
  EXPECT_EQ(b43.rep, (std::pair<BigInt, BigInt>{12, 11}));
  EXPECT_EQ(b43.astar, 115116);
  EXPECT_EQ(b43.bstar, -952105);
  EXPECT_EQ(b43.t, 1u);
  EXPECT_EQ(b43.s_ell, 1);
  EXPECT_FALSE(b43.recipe_based);
  EXPECT_FALSE(b43.unit_valuation_warning);

  auto b19 = brink_s_ell(K, 19, 5);
  EXPECT_EQ(b19.target, 361);
  EXPECT_EQ(b19.s_ell, 1);
  EXPECT_EQ(b19.t, 1u);
}

TEST(Brink, Preconditions) {
  ImagQuadField K(51);
  EXPECT_THROW(brink_s_ell(K, 7, 5), FieldError);   // inert
  EXPECT_THROW(brink_s_ell(K, 43, 7), FieldError);  // p inert
  EXPECT_THROW(brink_s_ell(K, 43, 2), FieldError);  // p | h_K
  auto r = brink_s_ell(ImagQuadField(23), 13, 59);
  EXPECT_TRUE(r.recipe_based);
}

TEST(Brink, SEllIsPowerOfP) {
  for (std::int64_t D : {51, 19, 23, 43}) {
    ImagQuadField K(D);
    for (auto p : {5, 7, 11, 13}) {
      if (K.splitting_type(p) != Splitting::split || K.class_number() % p == 0) continue;
      for (auto ell : primes_up_to(120)) {
        if (ell == p || K.splitting_type(ell) != Splitting::split) continue;
        auto r = brink_s_ell(K, ell, p);
        BigInt expect = r.t > 1 ? boost::multiprecision::pow(BigInt(p), r.t - 1) : BigInt(1);
        ASSERT_EQ(r.s_ell, expect);
        ASSERT_EQ(K.norm({r.astar, r.bstar}), boost::multiprecision::pow(r.target, p - 1));
      }
    }
  }
}
