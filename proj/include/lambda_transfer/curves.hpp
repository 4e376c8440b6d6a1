#pragma once
// Elliptic curves over Q: point counts, Tate's algorithm, conductor, Tamagawa numbers.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"

namespace lambda_transfer {

class CurveError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integral coefficients.
class EllipticCurveQ {
 public:
  EllipticCurveQ(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6, std::optional<std::string> label = {})
      : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}, label_(std::move(label)) {
    if (discriminant() == 0) throw CurveError("singular Weierstrass model (discriminant 0)");
  }

  explicit EllipticCurveQ(const std::array<BigInt, 5>& ainvs, std::optional<std::string> label = {})
      : EllipticCurveQ(ainvs[0], ainvs[1], ainvs[2], ainvs[3], ainvs[4], std::move(label)) {}

  [[nodiscard]] const std::array<BigInt, 5>& ainvs() const { return a_; }
  [[nodiscard]] const BigInt& a1() const { return a_[0]; }
  [[nodiscard]] const BigInt& a2() const { return a_[1]; }
  [[nodiscard]] const BigInt& a3() const { return a_[2]; }
  [[nodiscard]] const BigInt& a4() const { return a_[3]; }
  [[nodiscard]] const BigInt& a6() const { return a_[4]; }
  [[nodiscard]] const std::optional<std::string>& label() const { return label_; }
  [[nodiscard]] std::string display_name() const;

  [[nodiscard]] BigInt b2() const { return a1() * a1() + 4 * a2(); }
  [[nodiscard]] BigInt b4() const { return 2 * a4() + a1() * a3(); }
  [[nodiscard]] BigInt b6() const { return a3() * a3() + 4 * a6(); }
  [[nodiscard]] BigInt b8() const {
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() - a4() * a4();
  }
  [[nodiscard]] BigInt c4() const {
    BigInt b2v = b2();
    return b2v * b2v - 24 * b4();
  }
  [[nodiscard]] BigInt c6() const {
    BigInt b2v = b2(), b4v = b4();
    return -b2v * b2v * b2v + 36 * b2v * b4v - 216 * b6();
  }
  [[nodiscard]] BigInt discriminant() const {
    BigInt b2v = b2(), b4v = b4(), b6v = b6(), b8v = b8();
    return -b2v * b2v * b8v - 8 * b4v * b4v * b4v - 27 * b6v * b6v + 9 * b2v * b4v * b6v;
  }

  /// Change of coordinates x = x' + r, y = y' + s x' + t (u = 1).
  [[nodiscard]] EllipticCurveQ rst_transform(const BigInt& r, const BigInt& s, const BigInt& t) const;

  friend bool operator==(const EllipticCurveQ& a, const EllipticCurveQ& b) { return a.a_ == b.a_; }

 private:
  std::array<BigInt, 5> a_;
  std::optional<std::string> label_;
};

inline std::string EllipticCurveQ::display_name() const {
  if (label_) return *label_;
  std::string s = "[";
  for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + a_[i].str();
  return s + "]";
}

inline EllipticCurveQ EllipticCurveQ::rst_transform(const BigInt& r, const BigInt& s, const BigInt& t) const {
  const BigInt &A1 = a1(), &A2 = a2(), &A3 = a3(), &A4 = a4(), &A6 = a6();
  BigInt n1 = A1 + 2 * s;
  BigInt n2 = A2 - s * A1 + 3 * r - s * s;
  BigInt n3 = A3 + r * A1 + 2 * t;
  BigInt n4 = A4 - s * A3 + 2 * r * A2 - (t + r * s) * A1 + 3 * r * r - 2 * s * t;
  BigInt n6 = A6 + r * A4 + r * r * A2 + r * r * r - t * A3 - t * t - r * t * A1;
  return {n1, n2, n3, n4, n6, label_};
}

/// Integral model of the quadratic twist by d: Y^2 = X^3 + d b2 X^2 + 8 d^2 b4 X + 16 d^3 b6.
inline EllipticCurveQ quadratic_twist(const EllipticCurveQ& E, const BigInt& d) {
  if (d == 0) throw CurveError("twist by zero");
  return {0, d * E.b2(), 0, 8 * d * d * E.b4(), 16 * d * d * d * E.b6()};
}

enum class Reduction { good, split_multiplicative, nonsplit_multiplicative, additive };

inline const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::good: return "good";
    case Reduction::split_multiplicative: return "split_multiplicative";
    case Reduction::nonsplit_multiplicative: return "nonsplit_multiplicative";
    case Reduction::additive: return "additive";
  }
  return "?";
}

inline bool is_multiplicative(Reduction r) {
  return r == Reduction::split_multiplicative || r == Reduction::nonsplit_multiplicative;
}

struct LocalReductionData {
  std::int64_t ell = 0;
  Reduction reduction = Reduction::good;
  unsigned conductor_exponent = 0;
  unsigned tamagawa = 1;
  unsigned ord_min_disc = 0;
  std::string kodaira;
  /// Model reached by the algorithm; minimal at ell.
  std::array<BigInt, 5> minimal_model;
};

namespace detail {

// Residue-field helpers for Tate's algorithm at a prime p (p fits in int64).
struct TateContext {
  std::int64_t p;
  BigInt P;

  [[nodiscard]] bool pdiv(const BigInt& x) const { return x % P == 0; }
  [[nodiscard]] unsigned pval(const BigInt& x) const { return x == 0 ? 1000u : valuation(x, P); }
  [[nodiscard]] BigInt preduce(const BigInt& x) const { return BigInt(mod(x, p)); }
  [[nodiscard]] BigInt pinv(const BigInt& x) const { return BigInt(inverse_mod(mod(x, p), p)); }

  // a X^2 + b X + c has a root in F_p.
  [[nodiscard]] bool quad_roots(const BigInt& a, const BigInt& b, const BigInt& c) const {
    std::int64_t A = mod(a, p), B = mod(b, p), C = mod(c, p);
    if (A == 0) return B != 0 || C == 0;
    if (p == 2) {
      for (std::int64_t x = 0; x < 2; ++x)
        if ((A * x * x + B * x + C) % 2 == 0) return true;
      return false;
    }
    BigInt disc = BigInt(B) * B - 4 * BigInt(A) * C;
    return kronecker(disc, BigInt(p)) >= 0;
  }

  // Distinct roots of X^3 + b X^2 + c X + d in F_p.
  [[nodiscard]] int cubic_roots(const BigInt& b, const BigInt& c, const BigInt& d) const {
    return count_distinct_roots(PolyModP::from_big(p, {d, c, b, BigInt(1)}));
  }
};

}  // namespace detail

/// Tate's algorithm at ell, restarting on non-minimal models.
inline LocalReductionData local_data(const EllipticCurveQ& E, std::int64_t ell) {
  if (!is_prime(ell)) throw CurveError("local_data expects a prime, got " + std::to_string(ell));
  const detail::TateContext ctx{ell, BigInt(ell)};
  const BigInt& pi = ctx.P;
  const BigInt pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi3 * pi, pi6 = pi4 * pi2;
  const BigInt halfmodp = ell == 2 ? BigInt(0) : BigInt(inverse_mod(2, ell));

  EllipticCurveQ C = E;
  LocalReductionData out;
  out.ell = ell;
  auto finish = [&](Reduction red, unsigned f, unsigned c, unsigned vD, std::string ks) {
    out.reduction = red;
    out.conductor_exponent = f;
    out.tamagawa = c;
    out.ord_min_disc = vD;
    out.kodaira = std::move(ks);
    out.minimal_model = C.ainvs();
    return out;
  };

  while (true) {
    const unsigned vD = valuation(C.discriminant(), pi);
    if (vD == 0) return finish(Reduction::good, 0, 1, 0, "I0");

    // Move the singular point to (0,0): p | a3, a4, a6.
    BigInt r, t;
    {
      const BigInt a1 = C.a1(), a2 = C.a2(), a3 = C.a3(), a4 = C.a4(), a6 = C.a6();
      const BigInt b2 = C.b2(), b4 = C.b4(), b6 = C.b6(), c4 = C.c4(), c6 = C.c6();
      if (ell == 2) {
        if (ctx.pdiv(b2)) {
          r = a4;
          t = ((r + a2) * r + a4) * r + a6;
        } else {
          BigInt inv = ctx.pinv(a1);
          r = inv * a3;
          t = inv * (a4 + r * r);
        }
      } else if (ell == 3) {
        r = ctx.pdiv(b2) ? BigInt(-b6) : BigInt(-ctx.pinv(b2) * b4);
        t = a1 * r + a3;
      } else {
        if (ctx.pdiv(c4))
          r = -ctx.pinv(12) * b2;
        else
          r = -ctx.pinv(12 * c4) * (c6 + b2 * c4);
        t = -halfmodp * (a1 * r + a3);
      }
      r = ctx.preduce(r);
      t = ctx.preduce(t);
    }
    C = C.rst_transform(r, 0, t);

    if (!ctx.pdiv(C.c4())) {
      // Node at the origin; tangents are the roots of T^2 + a1 T - a2.
      if (ctx.quad_roots(1, C.a1(), -C.a2()))
        return finish(Reduction::split_multiplicative, 1, vD, vD, "I" + std::to_string(vD));
      return finish(Reduction::nonsplit_multiplicative, 1, vD % 2 == 0 ? 2 : 1, vD, "I" + std::to_string(vD));
    }

    if (ctx.pval(C.a6()) < 2) return finish(Reduction::additive, vD, 1, vD, "II");
    if (ctx.pval(C.b8()) < 3) return finish(Reduction::additive, vD - 1, 2, vD, "III");
    if (ctx.pval(C.b6()) < 3) {
      unsigned c = ctx.quad_roots(1, C.a3() / pi, -C.a6() / pi2) ? 3 : 1;
      return finish(Reduction::additive, vD - 2, c, vD, "IV");
    }

    // p | a1, a2; p^2 | a3, a4; p^3 | a6.
    BigInt s;
    if (ell == 2) {
      s = ctx.preduce(C.a2());
      t = pi * ctx.preduce(C.a6() / pi2);
    } else if (ell == 3) {
      s = C.a1();
      t = C.a3();
    } else {
      s = -C.a1() * halfmodp;
      t = -C.a3() * halfmodp;
    }
    C = C.rst_transform(0, s, t);

    const BigInt b = C.a2() / pi, c = C.a4() / pi2, d = C.a6() / pi3;
    const BigInt bb = b * b, cc = c * c, bc = b * c;
    const BigInt w = 27 * d * d - bb * cc + 4 * b * bb * d - 18 * bc * d + 4 * c * cc;
    const BigInt x = 3 * c - bb;
    const int sw = ctx.pdiv(w) ? (ctx.pdiv(x) ? 3 : 2) : 1;

    if (sw == 1) {
      unsigned cp = 1 + static_cast<unsigned>(ctx.cubic_roots(b, c, d));
      return finish(Reduction::additive, vD - 4, cp, vD, "I0*");
    }

    if (sw == 2) {
      // Double root of the cubic: move it to 0, then peel off powers of p.
      if (ell == 2)
        r = c;
      else if (ell == 3)
        r = c * ctx.pinv(b);
      else
        r = (bc - 9 * d) * ctx.pinv(2 * x);
      r = pi * ctx.preduce(r);
      C = C.rst_transform(r, 0, 0);

      unsigned ix = 3, iy = 3;
      BigInt mx = pi2, my = pi2;
      unsigned cp = 0;
      while (true) {
        BigInt a2t = C.a2() / pi, a3t = C.a3() / my, a4t = C.a4() / (pi * mx), a6t = C.a6() / (mx * my);
        if (!ctx.pdiv(a3t * a3t + 4 * a6t)) {
          cp = ctx.quad_roots(1, a3t, -a6t) ? 4 : 2;
          break;
        }
        t = ell == 2 ? BigInt(my * ctx.preduce(a6t)) : BigInt(my * ctx.preduce(-a3t * halfmodp));
        C = C.rst_transform(0, 0, t);
        my *= pi;
        ++iy;
        a2t = C.a2() / pi;
        a3t = C.a3() / my;
        a4t = C.a4() / (pi * mx);
        a6t = C.a6() / (mx * my);
        if (!ctx.pdiv(a4t * a4t - 4 * a6t * a2t)) {
          cp = ctx.quad_roots(a2t, a4t, a6t) ? 4 : 2;
          break;
        }
        r = ell == 2 ? BigInt(mx * ctx.preduce(a6t * ctx.pinv(a2t)))
                     : BigInt(mx * ctx.preduce(-a4t * ctx.pinv(2 * a2t)));
        C = C.rst_transform(r, 0, 0);
        mx *= pi;
        ++ix;
      }
      unsigned m = ix + iy - 5;
      return finish(Reduction::additive, vD - m - 4, cp, vD, "I" + std::to_string(m) + "*");
    }

    // Triple root: move it to 0.
    if (ell == 2)
      r = b;
    else if (ell == 3)
      r = -d;
    else
      r = -b * ctx.pinv(3);
    r = pi * ctx.preduce(r);
    C = C.rst_transform(r, 0, 0);

    const BigInt x3 = C.a3() / pi2, x6 = C.a6() / pi4;
    if (!ctx.pdiv(x3 * x3 + 4 * x6)) {
      unsigned cp = ctx.quad_roots(1, x3, -x6) ? 3 : 1;
      return finish(Reduction::additive, vD - 6, cp, vD, "IV*");
    }
    t = ell == 2 ? x6 : BigInt(x3 * halfmodp);
    t = -pi2 * ctx.preduce(t);
    C = C.rst_transform(0, 0, t);
    if (ctx.pval(C.a4()) < 4) return finish(Reduction::additive, vD - 7, 2, vD, "III*");
    if (ctx.pval(C.a6()) < 6) return finish(Reduction::additive, vD - 8, 1, vD, "II*");

    // Not minimal at p: scale by u = p and restart.
    C = EllipticCurveQ(C.a1() / pi, C.a2() / pi2, C.a3() / pi3, C.a4() / pi4, C.a6() / pi6, C.label());
  }
}

/// Primes dividing the model discriminant; superset of the bad primes.
inline std::vector<std::int64_t> discriminant_primes(const EllipticCurveQ& E) {
  std::vector<std::int64_t> out;
  BigInt disc = E.discriminant();
  for (const auto& q : factorize(disc < 0 ? BigInt(-disc) : disc).primes()) {
    if (q > std::numeric_limits<std::int64_t>::max()) throw CurveError("discriminant prime exceeds 64 bits");
    out.push_back(static_cast<std::int64_t>(q));
  }
  return out;
}

/// Local data at every prime of bad reduction, ascending.
inline std::vector<LocalReductionData> bad_reduction_table(const EllipticCurveQ& E) {
  std::vector<LocalReductionData> table;
  for (auto q : discriminant_primes(E)) {
    auto data = local_data(E, q);
    if (data.reduction != Reduction::good) table.push_back(std::move(data));
  }
  return table;
}

inline PrimeFactorization conductor(const EllipticCurveQ& E) {
  PrimeFactorization N;
  N.value = 1;
  for (const auto& data : bad_reduction_table(E)) {
    N.factors.emplace_back(BigInt(data.ell), data.conductor_exponent);
    N.value *= boost::multiprecision::pow(BigInt(data.ell), data.conductor_exponent);
  }
  return N;
}

inline BigInt tamagawa_product(const EllipticCurveQ& E) {
  BigInt c = 1;
  for (const auto& data : bad_reduction_table(E)) c *= data.tamagawa;
  return c;
}

namespace detail {

inline std::array<std::int64_t, 5> reduce_ainvs(const std::array<BigInt, 5>& a, std::int64_t ell) {
  return {mod(a[0], ell), mod(a[1], ell), mod(a[2], ell), mod(a[3], ell), mod(a[4], ell)};
}

// Affine points plus infinity on a model with good reduction at ell.
inline std::int64_t count_points(const std::array<BigInt, 5>& ainvs, std::int64_t ell) {
  auto [a1, a2, a3, a4, a6] = reduce_ainvs(ainvs, ell);
  std::int64_t count = 1;
  if (ell <= 3) {
    for (std::int64_t x = 0; x < ell; ++x)
      for (std::int64_t y = 0; y < ell; ++y)
        if (mod(y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6), ell) == 0) ++count;
    return count;
  }
  std::vector<signed char> chi(static_cast<std::size_t>(ell), -1);
  chi[0] = 0;
  for (std::int64_t y = 1; y < ell; ++y) chi[static_cast<std::size_t>(y * y % ell)] = 1;
  for (std::int64_t x = 0; x < ell; ++x) {
    // Discriminant of y^2 + (a1 x + a3) y - f(x) as a quadratic in y.
    std::int64_t lin = (a1 * x + a3) % ell;
    std::int64_t f = ((((x + a2) % ell) * x % ell + a4) % ell * x % ell + a6) % ell;
    std::int64_t disc = (lin * lin + 4 * f) % ell;
    count += 1 + chi[static_cast<std::size_t>(disc)];
  }
  return count;
}

}  // namespace detail

/// Minimal-at-ell model suitable for reduction mod ell; throws on bad reduction.
inline std::array<BigInt, 5> good_model_at(const EllipticCurveQ& E, std::int64_t ell) {
  if (E.discriminant() % ell != 0) return E.ainvs();
  auto data = local_data(E, ell);
  if (data.reduction != Reduction::good)
    throw CurveError(E.display_name() + " has bad reduction at " + std::to_string(ell));
  return data.minimal_model;
}

/// #E~(F_ell) at a prime of good reduction.
inline std::int64_t point_count(const EllipticCurveQ& E, std::int64_t ell) {
  if (!is_prime(ell)) throw CurveError("point_count expects a prime");
  return detail::count_points(good_model_at(E, ell), ell);
}

/// a_ell = ell + 1 - #E~(F_ell) at a prime of good reduction.
inline std::int64_t trace_of_frobenius(const EllipticCurveQ& E, std::int64_t ell) {
  return ell + 1 - point_count(E, ell);
}

/// a_ell at any prime: trace at good primes, +1 / -1 / 0 for split / nonsplit / additive.
inline std::int64_t ap_any(const EllipticCurveQ& E, std::int64_t ell) {
  if (E.discriminant() % ell != 0) return trace_of_frobenius(E, ell);
  auto data = local_data(E, ell);
  switch (data.reduction) {
    case Reduction::good: return ell + 1 - detail::count_points(data.minimal_model, ell);
    case Reduction::split_multiplicative: return 1;
    case Reduction::nonsplit_multiplicative: return -1;
    case Reduction::additive: return 0;
  }
  return 0;
}

/// Whether p does not divide #E~(F_q) for q = ell^k; counts over F_{ell^k} come from the
/// recurrence s_k = a s_{k-1} - ell s_{k-2} on Frobenius power sums.
inline bool reduced_curve_p_torsion_trivial(const EllipticCurveQ& E, const BigInt& q, const BigInt& p) {
  auto fq = factorize(q);
  if (fq.factors.size() != 1) throw CurveError("field size must be a prime power");
  const auto ell = static_cast<std::int64_t>(fq.factors.front().first);
  const unsigned k = fq.factors.front().second;
  const BigInt a = trace_of_frobenius(E, ell);
  BigInt s_prev = 2, s_cur = a;
  for (unsigned i = 1; i < k; ++i) {
    BigInt s_next = a * s_cur - ell * s_prev;
    s_prev = std::move(s_cur);
    s_cur = std::move(s_next);
  }
  BigInt order = q + 1 - s_cur;
  return order % p != 0;
}

enum class TorsionVerdict { verified_trivial, inconclusive };

inline const char* to_string(TorsionVerdict v) {
  return v == TorsionVerdict::verified_trivial ? "verified_trivial" : "inconclusive";
}

struct TorsionEvidence {
  TorsionVerdict verdict = TorsionVerdict::inconclusive;
  std::vector<std::int64_t> sampled_primes;
  BigInt gcd_curve = 0;
  BigInt gcd_twist = 0;
};

/// One-sided test that E(K)[p] = 0 for K of discriminant disc, via
/// E(K)[p] -> E(Q)[p] + E^(disc)(Q)[p] and gcds of reduced point counts.
inline TorsionEvidence torsion_p_trivial_over_K(const EllipticCurveQ& E, const BigInt& disc, std::int64_t p,
                                                std::size_t sample_count = 20, std::int64_t prime_bound = 1000) {
  if (p < 3 || !is_prime(p)) throw CurveError("torsion test expects an odd prime p");
  const EllipticCurveQ twist = quadratic_twist(E, disc);
  const BigInt bad = 2 * BigInt(p) * E.discriminant() * disc;
  TorsionEvidence ev;
  for (auto q : primes_up_to(prime_bound)) {
    if (ev.sampled_primes.size() == sample_count) break;
    if (bad % q == 0) continue;
    ev.sampled_primes.push_back(q);
    ev.gcd_curve = boost::multiprecision::gcd(ev.gcd_curve, BigInt(point_count(E, q)));
    ev.gcd_twist = boost::multiprecision::gcd(ev.gcd_twist, BigInt(point_count(twist, q)));
  }
  if (ev.sampled_primes.size() < sample_count)
    throw CurveError("fewer than " + std::to_string(sample_count) + " usable primes below " +
                     std::to_string(prime_bound));
  ev.verdict = (ev.gcd_curve % p != 0 && ev.gcd_twist % p != 0) ? TorsionVerdict::verified_trivial
                                                                : TorsionVerdict::inconclusive;
  return ev;
}

}  // namespace lambda_transfer
