#pragma once
// Imaginary quadratic fields Q(sqrt(-D)): class numbers, splitting, Z[omega] arithmetic and
// the prime-decomposition count s_ell in the anticyclotomic Z_p-extension.

#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"

namespace lambda_transfer {

class FieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoRepresentation : public FieldError {
 public:
  using FieldError::FieldError;
};

/// Number of primitive reduced forms (a,b,c) with b^2 - 4ac = disc:
/// |b| <= a <= c, and b >= 0 whenever |b| = a or a = c.
inline std::int64_t class_number(std::int64_t disc) {
  if (disc >= 0) throw FieldError("class_number expects a negative discriminant");
  if (mod(disc, 4) != 0 && mod(disc, 4) != 1) throw FieldError("discriminant must be 0 or 1 mod 4");
  const std::int64_t absd = -disc;
  std::int64_t h = 0;
  for (std::int64_t a = 1; 3 * a * a <= absd; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (mod(b - disc, 2) != 0) continue;
      std::int64_t num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  }
  return h;
}

enum class Splitting { split, inert, ramified };

inline const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    case Splitting::ramified: return "ramified";
  }
  return "?";
}

/// x + y*omega, with omega = (1 + sqrt(-D))/2 when D = 3 mod 4.
struct QuadInt {
  BigInt x = 0;
  BigInt y = 0;
  friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

class ImagQuadField {
 public:
  explicit ImagQuadField(std::int64_t D) : D_(D) {
    if (D <= 0) throw FieldError("D must be positive");
    for (const auto& [q, e] : factorize(D).factors)
      if (e > 1) throw FieldError("D must be squarefree, " + std::to_string(D) + " is not");
    disc_ = mod(D, 4) == 3 ? -D : -4 * D;
    class_number_ = lambda_transfer::class_number(disc_);
  }

  [[nodiscard]] std::int64_t D() const { return D_; }
  [[nodiscard]] std::int64_t disc() const { return disc_; }
  [[nodiscard]] std::int64_t class_number() const { return class_number_; }
  [[nodiscard]] bool has_half_integral_order() const { return mod(D_, 4) == 3; }

  [[nodiscard]] Splitting splitting_type(std::int64_t ell) const {
    switch (kronecker(disc_, ell)) {
      case 1: return Splitting::split;
      case -1: return Splitting::inert;
      default: return Splitting::ramified;
    }
  }

  /// omega^2 = omega - omega_norm().
  [[nodiscard]] BigInt omega_norm() const {
    require_half_integral();
    return BigInt((D_ + 1) / 4);
  }

  [[nodiscard]] BigInt norm(const QuadInt& z) const {
    return z.x * z.x + z.x * z.y + omega_norm() * z.y * z.y;
  }

  [[nodiscard]] QuadInt mul(const QuadInt& z, const QuadInt& w) const {
    const BigInt c = omega_norm();
    return {z.x * w.x - c * z.y * w.y, z.x * w.y + z.y * w.x + z.y * w.y};
  }

  [[nodiscard]] QuadInt conj(const QuadInt& z) const {
    require_half_integral();
    return {z.x + z.y, -z.y};
  }

  void require_half_integral() const {
    if (!has_half_integral_order())
      throw FieldError("Z[omega] arithmetic is implemented for D = 3 mod 4 only (D = " + std::to_string(D_) + ")");
  }

  friend bool operator==(const ImagQuadField& a, const ImagQuadField& b) { return a.D_ == b.D_; }

 private:
  std::int64_t D_;
  std::int64_t disc_;
  std::int64_t class_number_;
};

/// z^n in Z[omega] by square-and-multiply.
inline QuadInt quadint_pow(QuadInt z, std::uint64_t n, const ImagQuadField& K) {
  K.require_half_integral();
  QuadInt result{1, 0};
  while (n > 0) {
    if (n & 1) result = K.mul(result, z);
    z = K.mul(z, z);
    n >>= 1;
  }
  return result;
}

/// Primitive (gcd(a,b) = 1) solution of a^2 + ab + ((D+1)/4) b^2 = target. Preference order:
/// p does not divide b (when p is given), smallest |b|, a >= 0, smallest |a|, b > 0.
inline std::pair<BigInt, BigInt> norm_form_representation(const ImagQuadField& K, const BigInt& target,
                                                          std::optional<std::int64_t> p = std::nullopt) {
  K.require_half_integral();
  if (target < 1) throw FieldError("target must be positive");
  // 4 N(a + b omega) = (2a + b)^2 + D b^2.
  const BigInt bmax = isqrt(4 * target / K.D());
  std::optional<std::pair<BigInt, BigInt>> best;
  auto key = [&](const BigInt& a, const BigInt& b) {
    bool p_divides = p && b % *p == 0;
    return std::make_tuple(p_divides, BigInt(abs(b)), a < 0, BigInt(abs(a)), b < 0);
  };
  for (BigInt b = -bmax; b <= bmax; ++b) {
    BigInt disc = 4 * target - BigInt(K.D()) * b * b;
    if (disc < 0) continue;
    BigInt s = isqrt(disc);
    if (s * s != disc) continue;
    for (BigInt num : {BigInt(-b + s), BigInt(-b - s)}) {
      if (num % 2 != 0) continue;
      BigInt a = num / 2;
      if (boost::multiprecision::gcd(a, b) != 1) continue;
      if (!best || key(a, b) < key(best->first, best->second)) best = std::make_pair(a, b);
    }
  }
  if (!best) throw NoRepresentation("no primitive representation of " + target.str() + " by the principal form");
  return *best;
}

struct BrinkResult {
  std::int64_t ell = 0;
  std::int64_t p = 0;
  BigInt target;  // ell^h_K
  std::pair<BigInt, BigInt> rep;
  BigInt astar;
  BigInt bstar;
  unsigned t = 0;   // v_p(b*)
  BigInt s_ell = 1;  // p^max(0, t - 1)
  bool recipe_based = false;       // h_K != 2: recipe applied outside the class-number-2 case
  bool unit_valuation_warning = false;  // v_p(b*) = 0
};

/// s_ell from (a + b omega)^(p-1) = a* + b* omega with a^2 + ab + ((D+1)/4) b^2 = ell^h_K.
inline BrinkResult brink_s_ell(const ImagQuadField& K, std::int64_t ell, std::int64_t p) {
  K.require_half_integral();
  if (!is_prime(ell) || !is_prime(p)) throw FieldError("brink_s_ell expects primes");
  if (K.splitting_type(ell) != Splitting::split) throw FieldError(std::to_string(ell) + " is not split in K");
  if (K.splitting_type(p) != Splitting::split) throw FieldError(std::to_string(p) + " is not split in K");
  if (K.class_number() % p == 0) throw FieldError("p divides the class number");

  BrinkResult r;
  r.ell = ell;
  r.p = p;
  r.target = boost::multiprecision::pow(BigInt(ell), static_cast<unsigned>(K.class_number()));
  r.rep = norm_form_representation(K, r.target, p);
  QuadInt power = quadint_pow({r.rep.first, r.rep.second}, static_cast<std::uint64_t>(p - 1), K);
  r.astar = power.x;
  r.bstar = power.y;
  if (K.norm(power) != boost::multiprecision::pow(r.target, static_cast<unsigned>(p - 1)))
    throw FieldError("norm check failed in brink_s_ell");
  if (r.bstar == 0) throw FieldError("b* = 0: prime-decomposition recipe is degenerate");
  r.t = valuation(r.bstar, BigInt(p));
  r.unit_valuation_warning = r.t == 0;
  r.s_ell = r.t > 1 ? boost::multiprecision::pow(BigInt(p), r.t - 1) : BigInt(1);
  r.recipe_based = K.class_number() != 2;
  return r;
}

}  // namespace lambda_transfer
