#include <gtest/gtest.h>

#include "lambda_transfer/congruence.hpp"
#include "lambda_transfer/fixtures.hpp"

using namespace lambda_transfer;

namespace {

EllipticCurveQ named(std::string_view label) {
  for (const auto& c : fixtures::kCorpus)
    if (c.label == label) return fixtures::curve(c);
  throw std::runtime_error("no corpus curve " + std::string(label));
}

Eigenform as_eigenform(const EllipticCurveQ& E, std::int64_t bound) {
  CurveForm f(E);
  Eigenform g;
  g.label = E.display_name() + "-coeffs";
  g.level = f.level().value;
  for (const auto& d : f.bad_primes()) g.bad_prime_kinds[d.ell] = kind_of(d.reduction);
  for (auto ell : primes_up_to(bound)) g.a_coeffs[ell] = f.a_ell(ell);
  return g;
}

}  // namespace

TEST(Sturm, Bounds) {
  EXPECT_EQ(sturm_bound(817, 2), 146);
  EXPECT_EQ(sturm_bound(11, 2), 2);
  EXPECT_EQ(sturm_bound(1, 12), 1);
  EXPECT_EQ(sturm_bound(19, 2), 3);
  EXPECT_EQ(sturm_bound(817 * 19, 2), 2786);  // index 16720
}

TEST(Congruence, FixturePairModFive) {
  auto r = check_congruence(named("19a1"), named("817b1"), 5);
  EXPECT_EQ(r.verdict, CongruenceVerdict::pass);
  EXPECT_TRUE(r.strict_pass());
  EXPECT_EQ(r.level_used, 817);
  EXPECT_EQ(r.sturm_bound, 146);
  std::size_t primes_checked = 0;
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.pass) << c.ell;
    ++primes_checked;
    if (c.ell == 43) {
      EXPECT_EQ(c.kind, CheckKind::good_mult);
      EXPECT_EQ(c.lhs, mod(-1, 5));
      EXPECT_EQ(c.rhs, mod(44, 5));
    }
    if (c.ell == 19) EXPECT_EQ(c.kind, CheckKind::mult_mult);
    if (c.ell == 5) EXPECT_EQ(c.kind, CheckKind::skipped_divides_p);
  }
  EXPECT_EQ(primes_checked, primes_up_to(146).size());
}

TEST(Congruence, ProductLevelOption) {
  auto r = check_congruence(named("19a1"), named("817b1"), 5, LevelChoice::product);
  EXPECT_EQ(r.level_used, 19 * 817);
  EXPECT_EQ(r.sturm_bound, 2786);
  EXPECT_EQ(r.verdict, CongruenceVerdict::pass);
}

TEST(Congruence, FailsForOtherPrimes) {
  for (std::int64_t q : {7, 11, 13, 17, 23}) {
    auto r = check_congruence(named("19a1"), named("817b1"), q);
    EXPECT_EQ(r.verdict, CongruenceVerdict::fail) << q;
  }
  EXPECT_THROW(check_congruence(named("19a1"), named("817b1"), 19), CongruenceError);
  EXPECT_THROW(check_congruence(named("19a1"), named("817b1"), 8), CongruenceError);
}

TEST(Congruence, ReflexiveAndSymmetric) {
  std::vector<EllipticCurveQ> curves;
  for (const auto& c : fixtures::kCorpus) curves.push_back(fixtures::curve(c));
  for (auto p : {5, 7, 11}) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      CurveForm fi(curves[i]);
      if (fi.level().divisible_by(p)) continue;
      auto self = check_congruence(curves[i], curves[i], p);
      EXPECT_NE(self.verdict, CongruenceVerdict::fail) << curves[i].display_name();
      for (std::size_t j = i + 1; j < curves.size(); ++j) {
        if (CurveForm(curves[j]).level().divisible_by(p)) continue;
        if (CurveForm(curves[i]).level().value * CurveForm(curves[j]).level().value > 5000) continue;
        auto ab = check_congruence(curves[i], curves[j], p);
        auto ba = check_congruence(curves[j], curves[i], p);
        ASSERT_EQ(ab.verdict, ba.verdict);
        ASSERT_EQ(ab.checks.size(), ba.checks.size());
        for (std::size_t k = 0; k < ab.checks.size(); ++k) {
          ASSERT_EQ(ab.checks[k].pass, ba.checks[k].pass);
          ASSERT_EQ(ab.checks[k].lhs, ba.checks[k].rhs);
        }
      }
    }
  }
}

TEST(Congruence, IsogenousCurvesAgree) {
  for (auto p : {3, 7, 13}) {
    EXPECT_EQ(check_congruence(named("11a1"), named("11a3"), p).verdict, CongruenceVerdict::pass);
    EXPECT_EQ(check_congruence(named("19a1"), named("19a3"), p).verdict, CongruenceVerdict::pass);
  }
}

TEST(Congruence, AdditivePrimesAreSkipped) {
  // 27a1 and 36a1 both have additive reduction at 3
  auto r = check_congruence(named("27a1"), named("36a1"), 5);
  bool skipped = false;
  for (const auto& c : r.checks) skipped |= c.kind == CheckKind::skipped_additive;
  EXPECT_TRUE(skipped);
  EXPECT_NE(r.verdict, CongruenceVerdict::pass);
}

TEST(Congruence, EigenformAdapterMatchesCurve) {
  auto f1 = as_eigenform(named("19a1"), 200);
  auto f2 = as_eigenform(named("817b1"), 200);
  auto r = check_congruence(EigenformView(f1), EigenformView(f2), 5);
  auto s = check_congruence(named("19a1"), named("817b1"), 5);
  EXPECT_EQ(r.verdict, s.verdict);
  ASSERT_EQ(r.checks.size(), s.checks.size());
  for (std::size_t i = 0; i < r.checks.size(); ++i) EXPECT_EQ(r.checks[i].lhs, s.checks[i].lhs);

  f1.a_coeffs.erase(97);
  EXPECT_THROW(check_congruence(EigenformView(f1), EigenformView(f2), 5), MissingCoefficient);
}

TEST(Congruence, HigherWeightMixedRule) {
  Eigenform g, h;
  g.level = 7;
  g.weight = 4;
  g.bad_prime_kinds[7] = LocalKind::bad_multiplicative;
  h.level = 1;
  h.weight = 4;
  for (auto ell : primes_up_to(30)) {
    g.a_coeffs[ell] = 1;
    h.a_coeffs[ell] = 1;
  }
  h.a_coeffs[7] = 8;  // a(mult) (ell + 1) = 8
  auto r = check_congruence(EigenformView(h), EigenformView(g), 5);
  EXPECT_EQ(r.weight, 4);
  EXPECT_EQ(r.sturm_bound, 2);  // index 8, floor(32 / 12)
  EXPECT_EQ(r.verdict, CongruenceVerdict::pass);
  h.weight = 2;
  EXPECT_THROW(check_congruence(EigenformView(h), EigenformView(g), 5), CongruenceError);
}
