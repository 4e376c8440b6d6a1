#pragma once
// Uniform view of a weight-2r newform: either an elliptic curve (coefficients computed) or a
// user-supplied eigenform record (coefficients given).

#include <concepts>
#include <map>
#include <string>

#include "curves.hpp"

namespace lambda_transfer {

enum class LocalKind { good, bad_multiplicative, bad_additive };

inline const char* to_string(LocalKind k) {
  switch (k) {
    case LocalKind::good: return "good";
    case LocalKind::bad_multiplicative: return "bad_multiplicative";
    case LocalKind::bad_additive: return "bad_additive";
  }
  return "?";
}

inline LocalKind kind_of(Reduction r) {
  if (r == Reduction::good) return LocalKind::good;
  return is_multiplicative(r) ? LocalKind::bad_multiplicative : LocalKind::bad_additive;
}

class MissingCoefficient : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <class F>
concept FormLike = requires(const F& f, std::int64_t ell) {
  { f.name() } -> std::convertible_to<std::string>;
  { f.level() } -> std::convertible_to<PrimeFactorization>;
  { f.weight() } -> std::convertible_to<int>;
  { f.kind(ell) } -> std::same_as<LocalKind>;
  { f.a_ell(ell) } -> std::convertible_to<BigInt>;
};

/// Elliptic curve with its conductor and bad-prime table computed once.
class CurveForm {
 public:
  explicit CurveForm(EllipticCurveQ E) : E_(std::move(E)), bad_(bad_reduction_table(E_)) {
    level_.value = 1;
    for (const auto& d : bad_) {
      level_.factors.emplace_back(BigInt(d.ell), d.conductor_exponent);
      level_.value *= boost::multiprecision::pow(BigInt(d.ell), d.conductor_exponent);
    }
  }

  [[nodiscard]] const EllipticCurveQ& curve() const { return E_; }
  [[nodiscard]] std::string name() const { return E_.display_name(); }
  [[nodiscard]] const PrimeFactorization& level() const { return level_; }
  [[nodiscard]] int weight() const { return 2; }
  [[nodiscard]] const std::vector<LocalReductionData>& bad_primes() const { return bad_; }

  [[nodiscard]] const LocalReductionData* bad_data(std::int64_t ell) const {
    for (const auto& d : bad_)
      if (d.ell == ell) return &d;
    return nullptr;
  }

  [[nodiscard]] LocalKind kind(std::int64_t ell) const {
    const auto* d = bad_data(ell);
    return d ? kind_of(d->reduction) : LocalKind::good;
  }

  [[nodiscard]] BigInt a_ell(std::int64_t ell) const {
    if (const auto* d = bad_data(ell)) {
      switch (d->reduction) {
        case Reduction::split_multiplicative: return 1;
        case Reduction::nonsplit_multiplicative: return -1;
        default: return 0;
      }
    }
    return ell + 1 - detail::count_points(good_model_at(E_, ell), ell);
  }

  [[nodiscard]] BigInt tamagawa_product() const {
    BigInt c = 1;
    for (const auto& d : bad_) c *= d.tamagawa;
    return c;
  }

 private:
  EllipticCurveQ E_;
  std::vector<LocalReductionData> bad_;
  PrimeFactorization level_;
};

/// Newform in S_weight(Gamma_0(level)) with rational integer Hecke eigenvalues.
struct Eigenform {
  std::string label;
  BigInt level = 1;
  int weight = 2;
  std::map<std::int64_t, BigInt> a_coeffs;
  std::map<std::int64_t, LocalKind> bad_prime_kinds;

  [[nodiscard]] std::string name() const { return label.empty() ? "eigenform(level " + level.str() + ")" : label; }
  [[nodiscard]] PrimeFactorization level_factorization() const { return factorize(level); }

  [[nodiscard]] LocalKind kind(std::int64_t ell) const {
    auto it = bad_prime_kinds.find(ell);
    return it == bad_prime_kinds.end() ? LocalKind::good : it->second;
  }

  [[nodiscard]] BigInt a_ell(std::int64_t ell) const {
    auto it = a_coeffs.find(ell);
    if (it == a_coeffs.end()) throw MissingCoefficient("eigenform " + name() + " has no a_" + std::to_string(ell));
    return it->second;
  }
};

/// FormLike adapter around an Eigenform (caches the level factorisation).
class EigenformView {
 public:
  explicit EigenformView(Eigenform f) : f_(std::move(f)), level_(f_.level_factorization()) {}
  [[nodiscard]] const Eigenform& form() const { return f_; }
  [[nodiscard]] std::string name() const { return f_.name(); }
  [[nodiscard]] const PrimeFactorization& level() const { return level_; }
  [[nodiscard]] int weight() const { return f_.weight; }
  [[nodiscard]] LocalKind kind(std::int64_t ell) const { return f_.kind(ell); }
  [[nodiscard]] BigInt a_ell(std::int64_t ell) const { return f_.a_ell(ell); }

 private:
  Eigenform f_;
  PrimeFactorization level_;
};

static_assert(FormLike<CurveForm>);
static_assert(FormLike<EigenformView>);

}  // namespace lambda_transfer
