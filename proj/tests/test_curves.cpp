#include <gtest/gtest.h>

#include "lambda_transfer/fixtures.hpp"

using namespace lambda_transfer;

namespace {

EllipticCurveQ named(std::string_view label) {
  for (const auto& c : fixtures::kCorpus)
    if (c.label == label) return fixtures::curve(c);
  throw std::runtime_error("no corpus curve " + std::string(label));
}

// Points over F_ell by running over all (x, y).
std::int64_t brute_count(const std::array<BigInt, 5>& a, std::int64_t ell) {
  auto r = [&](int i) { return mod(a[i], ell); };
  std::int64_t n = 1;
  for (std::int64_t x = 0; x < ell; ++x)
    for (std::int64_t y = 0; y < ell; ++y)
      if (mod(y * y + r(0) * x * y + r(2) * y - x * x * x - r(1) * x * x - r(3) * x - r(4), ell) == 0) ++n;
  return n;
}

unsigned components(const std::string& k) {
  if (k == "II") return 1;
  if (k == "III") return 2;
  if (k == "IV") return 3;
  if (k == "IV*") return 7;
  if (k == "III*") return 8;
  if (k == "II*") return 9;
  if (k.back() == '*') return 5 + static_cast<unsigned>(std::stoul(k.substr(1, k.size() - 2)));
  return static_cast<unsigned>(std::stoul(k.substr(1)));
}

EllipticCurveQ scaled(const EllipticCurveQ& E, std::int64_t u) {
  const auto& a = E.ainvs();
  BigInt U = u;
  return {a[0] * U, a[1] * U * U, a[2] * U * U * U, a[3] * U * U * U * U, a[4] * boost::multiprecision::pow(U, 6)};
}

}  // namespace

TEST(Curve, Invariants19a1) {
  auto E = named("19a1");
  EXPECT_EQ(E.discriminant(), -6859);
  EXPECT_EQ(E.c4(), 448);
  EXPECT_EQ(E.c6(), 10088);
  EXPECT_THROW(EllipticCurveQ(0, 0, 0, 0, 0), CurveError);
  EXPECT_THROW(EllipticCurveQ(0, 0, 0, -3, 2), CurveError);  // node at (1, 0)
}

TEST(Curve, Conductors) {
  EXPECT_EQ(conductor(named("19a1")).value, 19);
  EXPECT_EQ(conductor(named("817b1")).value, 817);
  auto f = conductor(named("817b1"));
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, 19);
  EXPECT_EQ(f.factors[1].first, 43);
  for (const auto& c : fixtures::kCorpus) {
    auto N = conductor(fixtures::curve(c)).value;
    EXPECT_EQ(N, c.conductor) << c.label;
    EXPECT_GE(N, 11) << c.label;
  }
}

TEST(Curve, ReductionData) {
  auto E1 = named("19a1"), E2 = named("817b1");
  auto d19 = local_data(E1, 19);
  EXPECT_EQ(d19.reduction, Reduction::split_multiplicative);
  EXPECT_EQ(d19.ord_min_disc, 3u);
  EXPECT_EQ(d19.tamagawa, 3u);
  EXPECT_EQ(local_data(E1, 43).reduction, Reduction::good);
  EXPECT_EQ(local_data(E2, 19).reduction, Reduction::split_multiplicative);
  EXPECT_EQ(local_data(E2, 43).reduction, Reduction::split_multiplicative);
  EXPECT_EQ(local_data(E2, 43).tamagawa, 5u);
  EXPECT_EQ(tamagawa_product(E2), 10);
  EXPECT_EQ(tamagawa_product(E1), 3);
}

TEST(Curve, TamagawaProductsOfStandardCurves) {
  EXPECT_EQ(tamagawa_product(named("11a1")), 5);
  EXPECT_EQ(tamagawa_product(named("11a3")), 1);
  EXPECT_EQ(tamagawa_product(named("37a1")), 1);
  EXPECT_EQ(tamagawa_product(named("389a1")), 1);
  EXPECT_EQ(tamagawa_product(named("14a1")), 6);
  EXPECT_EQ(tamagawa_product(named("5077a1")), 1);
}

TEST(Curve, TateStructuralInvariants) {
  for (const auto& c : fixtures::kCorpus) {
    auto E = fixtures::curve(c);
    for (auto ell : discriminant_primes(E)) {
      auto d = local_data(E, ell);
      const unsigned m = d.reduction == Reduction::good ? 1 : components(d.kodaira);
      // Ogg: ord(Delta_min) = f + m - 1
      EXPECT_EQ(d.ord_min_disc, d.conductor_exponent + m - 1) << c.label << " at " << ell << " " << d.kodaira;
      EXPECT_GE(d.tamagawa, 1u);
      EXPECT_LE(d.tamagawa, std::max(m, 4u)) << c.label << " at " << ell;
      EXPECT_LE(d.ord_min_disc, valuation(E.discriminant(), BigInt(ell)));
      EXPECT_EQ((valuation(E.discriminant(), BigInt(ell)) - d.ord_min_disc) % 12, 0u);
      if (is_multiplicative(d.reduction)) {
        EXPECT_EQ(d.conductor_exponent, 1u);
        EXPECT_EQ(d.kodaira, "I" + std::to_string(d.ord_min_disc));
        if (d.reduction == Reduction::split_multiplicative) EXPECT_EQ(d.tamagawa, d.ord_min_disc);
      }
      if (d.reduction == Reduction::additive) EXPECT_GE(d.conductor_exponent, 2u);
      if (ell > 3) EXPECT_LE(d.conductor_exponent, 2u);
      EllipticCurveQ M(d.minimal_model);
      EXPECT_EQ(valuation(M.discriminant(), BigInt(ell)), d.ord_min_disc);
    }
  }
}

TEST(Curve, NonMinimalModelsRestart) {
  for (const auto& c : fixtures::kCorpus) {
    auto E = fixtures::curve(c);
    for (std::int64_t u : {2, 3, 5}) {
      auto S = scaled(E, u);
      ASSERT_EQ(conductor(S).value, c.conductor) << c.label << " u = " << u;
      ASSERT_EQ(tamagawa_product(S), tamagawa_product(E)) << c.label << " u = " << u;
      auto d = local_data(S, u);
      auto d0 = local_data(E, u);
      ASSERT_EQ(d.ord_min_disc, d0.ord_min_disc);
      ASSERT_EQ(d.kodaira, d0.kodaira);
    }
  }
}

TEST(Curve, ChangeOfCoordinatesPreservesLocalData) {
  for (const auto& c : fixtures::kCorpus) {
    auto E = fixtures::curve(c);
    auto T = E.rst_transform(3, -1, 2);
    EXPECT_EQ(T.discriminant(), E.discriminant());
    EXPECT_EQ(conductor(T).value, c.conductor);
    for (auto ell : discriminant_primes(E)) EXPECT_EQ(local_data(T, ell).kodaira, local_data(E, ell).kodaira);
  }
}

TEST(Traces, KnownValues19a1) {
  auto E = named("19a1");
  const std::pair<std::int64_t, std::int64_t> expected[] = {{2, 0}, {3, -2}, {5, 3}, {7, -1}, {11, 3}, {13, -4}, {43, -1}};
  for (auto [ell, a] : expected) EXPECT_EQ(trace_of_frobenius(E, ell), a) << ell;
  EXPECT_EQ(ap_any(E, 19), 1);
  EXPECT_THROW(trace_of_frobenius(E, 19), CurveError);
  EXPECT_EQ(trace_of_frobenius(named("11a1"), 2), -2);
  EXPECT_EQ(trace_of_frobenius(named("37a1"), 2), -2);
}

TEST(Traces, PointCountsMatchEnumeration) {
  for (const auto& c : fixtures::kCorpus) {
    auto E = fixtures::curve(c);
    for (auto ell : primes_up_to(97)) {
      if (E.discriminant() % ell == 0) continue;
      ASSERT_EQ(point_count(E, ell), brute_count(E.ainvs(), ell)) << c.label << " " << ell;
    }
  }
}

TEST(Traces, HasseBoundFixtures) {
  for (auto label : {"19a1", "817b1"}) {
    auto E = named(label);
    for (auto ell : primes_up_to(1000)) {
      auto a = ap_any(E, ell);
      ASSERT_LE(a * a, 4 * ell) << label << " " << ell;
    }
  }
}

TEST(Traces, TwistDuality) {
  for (std::int64_t d : {-51, -3, -4, 5, -7, 13}) {
    for (auto label : {"11a1", "19a1", "37a1", "817b1"}) {
      auto E = named(label);
      auto Et = quadratic_twist(E, d);
      auto EtEt = quadratic_twist(Et, d);
      for (auto ell : primes_up_to(200)) {
        if (ell == 2 || (E.discriminant() * d) % ell == 0) continue;
        ASSERT_EQ(trace_of_frobenius(Et, ell), kronecker(d, ell) * trace_of_frobenius(E, ell));
        ASSERT_EQ(trace_of_frobenius(EtEt, ell), trace_of_frobenius(E, ell));
      }
    }
  }
}

TEST(Torsion, TrivialOverK) {
  auto ev = torsion_p_trivial_over_K(named("19a1"), -51, 5);
  EXPECT_EQ(ev.verdict, TorsionVerdict::verified_trivial);
  EXPECT_EQ(ev.sampled_primes.size(), 20u);
  EXPECT_EQ(torsion_p_trivial_over_K(named("817b1"), -51, 5).verdict, TorsionVerdict::verified_trivial);
  // 11a1 has a rational 5-torsion point
  EXPECT_EQ(torsion_p_trivial_over_K(named("11a1"), -51, 5).verdict, TorsionVerdict::inconclusive);
  EXPECT_THROW(torsion_p_trivial_over_K(named("19a1"), -51, 2), CurveError);
}

TEST(Torsion, ReducedCurveOverExtensions) {
  auto E = named("19a1");
  EXPECT_TRUE(reduced_curve_p_torsion_trivial(E, 5, 5));  // #E(F_5) = 3
  EXPECT_FALSE(reduced_curve_p_torsion_trivial(E, 5, 3));
  for (auto label : {"11a1", "19a1", "37a1"}) {
    auto C = named(label);
    for (auto ell : {2, 3, 5, 7}) {
      if (C.discriminant() % ell == 0) continue;
      // #E(F_{ell^2}) = #E(F_ell) (ell + 1 + a)
      const std::int64_t a = trace_of_frobenius(C, ell);
      const std::int64_t n2 = (ell + 1 - a) * (ell + 1 + a);
      for (auto p : {2, 3, 5, 7, 11, 13})
        ASSERT_EQ(reduced_curve_p_torsion_trivial(C, BigInt(ell * ell), p), n2 % p != 0);
    }
  }
}
