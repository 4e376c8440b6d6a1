#pragma once
// Residual congruence E1[p] ~ E2[p] by Hecke-coefficient comparison up to the Sturm bound.

#include <vector>

#include "forms.hpp"

namespace lambda_transfer {

class CongruenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// floor(k/12 * [SL2(Z) : Gamma_0(M)]), index M prod_{l | M} (1 + 1/l).
inline BigInt sturm_bound(const BigInt& M, int k) {
  if (M < 1) throw CongruenceError("level must be positive");
  if (k < 2 || k % 2 != 0) throw CongruenceError("weight must be even and at least 2");
  BigInt index = 1;
  for (const auto& [q, e] : factorize(M).factors) index *= boost::multiprecision::pow(q, e - 1) * (q + 1);
  return BigInt(k) * index / 12;
}

enum class LevelChoice { lcm, product };

inline const char* to_string(LevelChoice c) { return c == LevelChoice::lcm ? "lcm" : "product"; }

enum class CheckKind { good_good, good_mult, mult_mult, skipped_additive, skipped_divides_p };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::good_good: return "good_good";
    case CheckKind::good_mult: return "good_mult";
    case CheckKind::mult_mult: return "mult_mult";
    case CheckKind::skipped_additive: return "skipped_additive";
    case CheckKind::skipped_divides_p: return "skipped_divides_p";
  }
  return "?";
}

enum class CongruenceVerdict { pass, fail, pass_with_skips };

inline const char* to_string(CongruenceVerdict v) {
  switch (v) {
    case CongruenceVerdict::pass: return "pass";
    case CongruenceVerdict::fail: return "fail";
    case CongruenceVerdict::pass_with_skips: return "pass_with_skips";
  }
  return "?";
}

struct CongruenceCheck {
  std::int64_t ell = 0;
  CheckKind kind = CheckKind::good_good;
  std::int64_t lhs = 0;  // residues mod p
  std::int64_t rhs = 0;
  bool pass = true;
};

struct CongruenceReport {
  std::int64_t p = 0;
  int weight = 2;
  BigInt sturm_bound;
  BigInt level_used;
  LevelChoice level_choice = LevelChoice::lcm;
  std::vector<CongruenceCheck> checks;
  CongruenceVerdict verdict = CongruenceVerdict::pass;

  [[nodiscard]] bool strict_pass() const { return verdict == CongruenceVerdict::pass; }
};

namespace detail {

inline CongruenceCheck compare_at(std::int64_t ell, std::int64_t p, LocalKind k1, const BigInt& a1, LocalKind k2,
                                  const BigInt& a2) {
  CongruenceCheck c;
  c.ell = ell;
  const BigInt lift = ell + 1;
  if (k1 == LocalKind::bad_additive || k2 == LocalKind::bad_additive) {
    c.kind = CheckKind::skipped_additive;
    return c;
  }
  BigInt lhs = a1, rhs = a2;
  if (k1 == LocalKind::good && k2 == LocalKind::good) {
    c.kind = CheckKind::good_good;
  } else if (k1 == LocalKind::good) {
    c.kind = CheckKind::good_mult;
    rhs *= lift;
  } else if (k2 == LocalKind::good) {
    c.kind = CheckKind::good_mult;
    lhs *= lift;
  } else {
    c.kind = CheckKind::mult_mult;
    lhs *= lift;
    rhs *= lift;
  }
  c.lhs = mod(lhs, p);
  c.rhs = mod(rhs, p);
  c.pass = c.lhs == c.rhs;
  return c;
}

}  // namespace detail

/// Compares a_ell mod p for every prime ell <= B, B the Sturm bound at lcm(N1, N2) (or N1 N2).
/// ell = p is recorded as skipped_divides_p yet still enforces a_p(f1) = a_p(f2) mod p; only
/// skipped_additive entries downgrade the verdict to pass_with_skips.
template <FormLike F1, FormLike F2>
CongruenceReport check_congruence(const F1& f1, const F2& f2, std::int64_t p,
                                  LevelChoice level_choice = LevelChoice::lcm) {
  if (!is_prime(p)) throw CongruenceError("p must be prime");
  const PrimeFactorization N1 = f1.level(), N2 = f2.level();
  if (N1.divisible_by(p) || N2.divisible_by(p))
    throw CongruenceError("p = " + std::to_string(p) + " divides a level");
  if (f1.weight() != f2.weight()) throw CongruenceError("forms have different weights");

  CongruenceReport report;
  report.p = p;
  report.weight = f1.weight();
  report.level_choice = level_choice;
  report.level_used = level_choice == LevelChoice::lcm ? BigInt(boost::multiprecision::lcm(N1.value, N2.value))
                                                       : BigInt(N1.value * N2.value);
  report.sturm_bound = sturm_bound(report.level_used, report.weight);
  if (report.sturm_bound > 10'000'000) throw CongruenceError("Sturm bound too large for naive comparison");
  const auto bound = static_cast<std::int64_t>(report.sturm_bound);

  auto primes = primes_up_to(std::max(bound, p));
  for (auto ell : primes) {
    if (ell > bound && ell != p) continue;
    CongruenceCheck c;
    if (ell == p) {
      c.ell = p;
      c.kind = CheckKind::skipped_divides_p;
      c.lhs = mod(f1.a_ell(p), p);
      c.rhs = mod(f2.a_ell(p), p);
      c.pass = c.lhs == c.rhs;
    } else {
      const LocalKind k1 = f1.kind(ell), k2 = f2.kind(ell);
      const bool need_a1 = k1 != LocalKind::bad_additive && k2 != LocalKind::bad_additive;
      c = detail::compare_at(ell, p, k1, need_a1 ? f1.a_ell(ell) : BigInt(0), k2,
                             need_a1 ? f2.a_ell(ell) : BigInt(0));
    }
    report.checks.push_back(c);
  }

  bool failed = false, skipped = false;
  for (const auto& c : report.checks) {
    failed |= !c.pass;
    skipped |= c.kind == CheckKind::skipped_additive;
  }
  report.verdict = failed ? CongruenceVerdict::fail
                          : (skipped ? CongruenceVerdict::pass_with_skips : CongruenceVerdict::pass);
  return report;
}

inline CongruenceReport check_congruence(const EllipticCurveQ& E1, const EllipticCurveQ& E2, std::int64_t p,
                                         LevelChoice level_choice = LevelChoice::lcm) {
  return check_congruence(CurveForm(E1), CurveForm(E2), p, level_choice);
}

}  // namespace lambda_transfer
