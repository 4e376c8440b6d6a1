#pragma once
// Exact integer, modular and F_p[X] arithmetic shared by every other header.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lambda_transfer {

using BigInt = boost::multiprecision::cpp_int;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod64(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod64(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Deterministic for every n < 2^64 with the first twelve prime bases.
inline bool miller_rabin64(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool miller_rabin_big(const BigInt& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<u64>::max()) return miller_rabin64(static_cast<u64>(n));
  static constexpr unsigned kBases[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                        41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  for (unsigned p : kBases) {
    if (n % p == 0) return n == p;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned a : kBases) {
    BigInt x = boost::multiprecision::powm(BigInt(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Brent's variant; n must be odd composite.
inline u64 pollard_rho64(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod64(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 m = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline BigInt pollard_rho_big(const BigInt& n) {
  if ((n & 1) == 0) return 2;
  for (unsigned c = 1;; ++c) {
    auto f = [&](const BigInt& x) { return (x * x + c) % n; };
    BigInt x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = boost::multiprecision::gcd(x > y ? BigInt(x - y) : BigInt(y - x), n);
    }
    if (d != n) return d;
  }
}

// floor(n^(1/k)) by bisection.
inline BigInt iroot(const BigInt& n, unsigned k) {
  BigInt lo = 1, hi = BigInt(1) << (boost::multiprecision::msb(n) / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, k) <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline void split_into(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (miller_rabin_big(n)) {
    out.push_back(n);
    return;
  }
  // rho is hopeless on p^k with large p
  for (unsigned k = 2; k <= boost::multiprecision::msb(n); ++k) {
    BigInt r = iroot(n, k);
    if (r > 1 && boost::multiprecision::pow(r, k) == n) {
      for (unsigned i = 0; i < k; ++i) split_into(r, out);
      return;
    }
  }
  BigInt d = n <= std::numeric_limits<u64>::max() ? BigInt(pollard_rho64(static_cast<u64>(n)))
                                                   : pollard_rho_big(n);
  split_into(d, out);
  split_into(n / d, out);
}

}  // namespace detail

inline bool is_prime(const BigInt& n) { return detail::miller_rabin_big(n); }

inline bool is_prime(std::int64_t n) { return n >= 2 && detail::miller_rabin64(static_cast<std::uint64_t>(n)); }

/// Largest k with p^k | n; n must be nonzero.
inline unsigned valuation(BigInt n, const BigInt& p) {
  if (n == 0) throw ArithmeticError("valuation of zero");
  if (p < 2) throw ArithmeticError("valuation base must be at least 2");
  unsigned k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

/// Nonnegative residue of a mod m.
inline std::int64_t mod(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, r = mod(a, m), y = 1;
  while (r != 0) {
    std::int64_t q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, y) = std::make_pair(y, x - q * y);
  }
  if (g != 1) throw ArithmeticError("no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
  return mod(x, m);
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  return static_cast<std::int64_t>(
      detail::powmod64(static_cast<std::uint64_t>(mod(base, m)), exp, static_cast<std::uint64_t>(m)));
}

inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw ArithmeticError("square root of a negative integer");
  return boost::multiprecision::sqrt(n);
}

/// Prime factorisation of a positive integer, primes ascending.
struct PrimeFactorization {
  BigInt value = 1;
  std::vector<std::pair<BigInt, unsigned>> factors;

  [[nodiscard]] BigInt product() const {
    BigInt r = 1;
    for (const auto& [prime, e] : factors) r *= boost::multiprecision::pow(prime, e);
    return r;
  }

  [[nodiscard]] std::vector<BigInt> primes() const {
    std::vector<BigInt> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.first);
    return out;
  }

  [[nodiscard]] bool divisible_by(const BigInt& prime) const {
    return std::any_of(factors.begin(), factors.end(), [&](const auto& f) { return f.first == prime; });
  }

  [[nodiscard]] unsigned exponent_of(const BigInt& prime) const {
    for (const auto& [q, e] : factors)
      if (q == prime) return e;
    return 0;
  }

  friend bool operator==(const PrimeFactorization&, const PrimeFactorization&) = default;
};

/// Trial division up to 2^20, then Brent/Pollard rho with Miller-Rabin.
inline PrimeFactorization factorize(const BigInt& n) {
  if (n < 1) throw ArithmeticError("factorize expects a positive integer");
  PrimeFactorization out;
  out.value = n;
  BigInt rest = n;
  constexpr std::uint64_t kTrialBound = 1u << 20;
  for (std::uint64_t d = 2; d <= kTrialBound && BigInt(d) * d <= rest; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (rest % d == 0) {
      rest /= d;
      ++e;
    }
    if (e > 0) out.factors.emplace_back(BigInt(d), e);
  }
  if (rest > 1) {
    std::vector<BigInt> primes;
    detail::split_into(rest, primes);
    std::sort(primes.begin(), primes.end());
    for (const auto& q : primes) {
      if (!out.factors.empty() && out.factors.back().first == q)
        ++out.factors.back().second;
      else
        out.factors.emplace_back(q, 1);
    }
  }
  return out;
}

inline BigInt euler_phi(const BigInt& n) {
  BigInt result = n;
  for (const auto& [q, e] : factorize(n).factors) result = result / q * (q - 1);
  return result;
}

/// Kronecker symbol (a | n), extended to n <= 0 and n even.
inline int kronecker(BigInt a, BigInt n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  unsigned twos = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((a & 1) == 0) return 0;
    if (twos & 1) {
      int r8 = static_cast<int>(mod(a, 8));
      if (r8 == 3 || r8 == 5) result = -result;
    }
  }
  // Jacobi symbol for odd positive n.
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      int r8 = static_cast<int>(n % 8);
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

inline int kronecker(std::int64_t a, std::int64_t n) { return kronecker(BigInt(a), BigInt(n)); }

inline std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::int64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

/// Dense polynomial over F_p, constant term first, normalised (no trailing zeros).
class PolyModP {
 public:
  PolyModP(std::int64_t p, std::vector<std::int64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
    if (p < 2 || !is_prime(p)) throw ArithmeticError("PolyModP modulus must be prime");
    for (auto& c : coeffs_) c = mod(c, p_);
    normalize();
  }

  static PolyModP from_big(std::int64_t p, const std::vector<BigInt>& coeffs) {
    std::vector<std::int64_t> reduced;
    reduced.reserve(coeffs.size());
    for (const auto& c : coeffs) reduced.push_back(mod(c, p));
    return {p, std::move(reduced)};
  }

  [[nodiscard]] std::int64_t modulus() const { return p_; }
  [[nodiscard]] const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::int64_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }

  [[nodiscard]] std::int64_t eval(std::int64_t x) const {
    std::int64_t acc = 0;
    x = mod(x, p_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (mulm(acc, x) + *it) % p_;
    return acc;
  }

  /// Quotient by (X - x0) and the remainder f(x0), via synthetic division.
  [[nodiscard]] std::pair<PolyModP, std::int64_t> divide_linear(std::int64_t x0) const {
    if (is_zero()) return {*this, 0};
    x0 = mod(x0, p_);
    std::vector<std::int64_t> q(coeffs_.size() - 1, 0);
    std::int64_t carry = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      std::int64_t v = (coeffs_[i] + mulm(carry, x0)) % p_;
      if (i == 0) return {PolyModP(p_, std::move(q)), v};
      q[i - 1] = v;
      carry = v;
    }
    return {PolyModP(p_, std::move(q)), 0};
  }

  friend PolyModP operator*(const PolyModP& a, const PolyModP& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return {a.p_, {}};
    std::vector<std::int64_t> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] = (r[i + j] + a.mulm(a.coeffs_[i], b.coeffs_[j])) % a.p_;
    return {a.p_, std::move(r)};
  }

  friend PolyModP operator-(const PolyModP& a, const PolyModP& b) {
    a.check_same(b);
    std::vector<std::int64_t> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return {a.p_, std::move(r)};
  }

  /// Remainder of division by a nonzero divisor.
  [[nodiscard]] PolyModP remainder(const PolyModP& divisor) const {
    check_same(divisor);
    if (divisor.is_zero()) throw ArithmeticError("polynomial division by zero");
    std::vector<std::int64_t> r = coeffs_;
    const auto& d = divisor.coeffs_;
    std::int64_t lead_inv = inverse_mod(d.back(), p_);
    while (r.size() >= d.size() && !r.empty()) {
      std::int64_t factor = mulm(r.back(), lead_inv);
      std::size_t shift = r.size() - d.size();
      for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] = mod(r[shift + i] - mulm(factor, d[i]), p_);
      while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return {p_, std::move(r)};
  }

  [[nodiscard]] PolyModP monic() const {
    if (is_zero()) return *this;
    std::int64_t inv = inverse_mod(coeffs_.back(), p_);
    std::vector<std::int64_t> r = coeffs_;
    for (auto& c : r) c = mulm(c, inv);
    return {p_, std::move(r)};
  }

  friend bool operator==(const PolyModP&, const PolyModP&) = default;

 private:
  [[nodiscard]] std::int64_t mulm(std::int64_t a, std::int64_t b) const {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p_);
  }
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  void check_same(const PolyModP& other) const {
    if (other.p_ != p_) throw ArithmeticError("mixing polynomials over different primes");
  }

  std::int64_t p_;
  std::vector<std::int64_t> coeffs_;
};

inline PolyModP poly_gcd(PolyModP a, PolyModP b) {
  while (!b.is_zero()) {
    PolyModP r = a.remainder(b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// base^exp reduced modulo a nonzero polynomial.
inline PolyModP poly_powmod(PolyModP base, std::uint64_t exp, const PolyModP& modulus) {
  PolyModP result(modulus.modulus(), {1});
  result = result.remainder(modulus);
  base = base.remainder(modulus);
  while (exp > 0) {
    if (exp & 1) result = (result * base).remainder(modulus);
    base = (base * base).remainder(modulus);
    exp >>= 1;
  }
  return result;
}

/// Number of distinct roots of f in F_p, as deg gcd(f, X^p - X).
inline int count_distinct_roots(const PolyModP& f) {
  if (f.is_zero()) throw ArithmeticError("root count of the zero polynomial");
  if (f.degree() <= 0) return 0;
  const std::int64_t p = f.modulus();
  PolyModP x(p, {0, 1});
  PolyModP xp = poly_powmod(x, static_cast<std::uint64_t>(p), f);
  return poly_gcd(f, xp - x).degree();
}

/// Largest m with (X - x0)^m | f over F_p, by repeated synthetic division.
inline unsigned root_multiplicity(const PolyModP& f, std::int64_t x0) {
  if (f.is_zero()) throw ArithmeticError("root multiplicity of the zero polynomial is undefined");
  unsigned m = 0;
  PolyModP current = f;
  while (current.degree() >= 1) {
    auto [quotient, rem] = current.divide_linear(x0);
    if (rem != 0) break;
    current = std::move(quotient);
    ++m;
  }
  return m;
}

inline std::string to_string(const BigInt& n) { return n.str(); }

}  // namespace lambda_transfer
