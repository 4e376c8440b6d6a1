#pragma once
// Euler factors, local lambda-invariants, hypothesis checks and the lambda-transfer identity
//   lambda(f1) + 2 sum_{l | N1 N2} lambda_l(f1) = lambda(f2) + 2 sum_{l | N1 N2} lambda_l(f2)
// for residually congruent forms in the indefinite anticyclotomic setting.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "congruence.hpp"
#include "quadfield.hpp"

namespace lambda_transfer {

class IwasawaError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InertPrime : public IwasawaError {
 public:
  using IwasawaError::IwasawaError;
};

class InconsistentInvariants : public IwasawaError {
 public:
  using IwasawaError::IwasawaError;
};

// ---------------------------------------------------------------------------
// Euler factors

/// P_v(f)(X) mod p in the variable X = ell^{-1}(T + 1).
struct EulerFactorData {
  std::int64_t ell = 0;
  LocalKind kind = LocalKind::good;
  BigInt a_ell = 0;
  PolyModP poly{2, {1}};
};

inline EulerFactorData euler_factor(const BigInt& a_ell, std::int64_t ell, LocalKind kind, std::int64_t p) {
  if (ell == p) throw IwasawaError("Euler factor at ell = p is not defined here");
  if (!is_prime(p)) throw IwasawaError("p must be prime");
  EulerFactorData f;
  f.ell = ell;
  f.kind = kind;
  f.a_ell = a_ell;
  switch (kind) {
    case LocalKind::good: f.poly = PolyModP::from_big(p, {BigInt(1), BigInt(-a_ell), BigInt(ell)}); break;
    case LocalKind::bad_multiplicative: f.poly = PolyModP::from_big(p, {BigInt(1), BigInt(-a_ell)}); break;
    case LocalKind::bad_additive: f.poly = PolyModP(p, {1}); break;
  }
  return f;
}

/// Multiplicity of X = ell^{-1} as a root of the reduced Euler factor.
inline unsigned d_ell(const EulerFactorData& factor, std::int64_t p) {
  if (factor.ell % p == 0) throw IwasawaError("d_ell undefined for ell = p");
  if (factor.poly.modulus() != p) throw IwasawaError("Euler factor reduced modulo a different prime");
  return root_multiplicity(factor.poly, inverse_mod(factor.ell, p));
}

// ---------------------------------------------------------------------------
// Local lambda-invariants

enum class SEllSource { computed, short_circuit };

inline const char* to_string(SEllSource s) { return s == SEllSource::computed ? "computed" : "short_circuit"; }

struct LocalLambdaData {
  std::int64_t ell = 0;
  EulerFactorData factor;
  unsigned d_ell = 0;
  BigInt s_ell = 1;
  BigInt lambda_ell = 0;
  SEllSource s_source = SEllSource::short_circuit;
  std::optional<BrinkResult> brink;
};

/// lambda_ell = s_ell d_ell. s_ell is only computed when d_ell > 0 unless audit_brink is set.
template <FormLike F>
LocalLambdaData local_lambda(const F& form, const ImagQuadField& K, std::int64_t ell, std::int64_t p,
                             bool audit_brink = false) {
  if (ell == p) throw IwasawaError("local_lambda requires ell != p");
  if (K.splitting_type(ell) != Splitting::split)
    throw InertPrime(std::to_string(ell) + " is " + to_string(K.splitting_type(ell)) + " in K, not split");
  LocalLambdaData out;
  out.ell = ell;
  const LocalKind kind = form.kind(ell);
  const BigInt a = kind == LocalKind::bad_additive ? BigInt(0) : BigInt(form.a_ell(ell));
  out.factor = euler_factor(a, ell, kind, p);
  out.d_ell = d_ell(out.factor, p);
  if (out.d_ell > 0 || audit_brink) {
    out.brink = brink_s_ell(K, ell, p);
    out.s_ell = out.brink->s_ell;
    out.s_source = SEllSource::computed;
  }
  out.lambda_ell = out.s_ell * out.d_ell;
  return out;
}

inline LocalLambdaData local_lambda(const EllipticCurveQ& E, const ImagQuadField& K, std::int64_t ell, std::int64_t p,
                                    bool audit_brink = false) {
  return local_lambda(CurveForm(E), K, ell, p, audit_brink);
}

// ---------------------------------------------------------------------------
// Certificates and check reports

/// Facts the tool cannot compute; every field must be vouched for by `source`.
struct HypothesisCertificate {
  std::optional<bool> rank_one;
  std::optional<bool> heegner_point_infinite_order;
  std::optional<bool> heegner_index_equals_tamagawa_p_part;
  std::optional<bool> sha_p_trivial;
  std::optional<bool> mu_zero;
  std::optional<bool> residually_irreducible;
  std::optional<bool> no_finite_submodule;
  std::optional<std::uint64_t> lambda_known;
  std::string source;

  void validate() const {
    if (lambda_known && mu_zero != true) throw IwasawaError("certificate quotes lambda without mu = 0");
    if (source.empty()) throw IwasawaError("certificate has no source");
  }
  friend bool operator==(const HypothesisCertificate&, const HypothesisCertificate&) = default;
};

enum class CheckStatus { pass, fail, inconclusive, missing_certificate };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::missing_certificate: return "missing_certificate";
  }
  return "?";
}

struct SubCheck {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct CheckReport {
  std::string hypothesis;  // e.g. "(Heeg.)"
  std::string subject;     // form name
  CheckStatus status = CheckStatus::pass;
  std::vector<SubCheck> subchecks;
  std::vector<std::string> missing_facts;
  std::string note;

  [[nodiscard]] bool passed() const { return status == CheckStatus::pass; }

  // Overall status: any fail > any missing certificate > any inconclusive > pass.
  void settle() {
    auto any = [&](CheckStatus s) {
      return std::any_of(subchecks.begin(), subchecks.end(), [&](const SubCheck& c) { return c.status == s; });
    };
    if (any(CheckStatus::fail))
      status = CheckStatus::fail;
    else if (any(CheckStatus::missing_certificate))
      status = CheckStatus::missing_certificate;
    else if (any(CheckStatus::inconclusive))
      status = CheckStatus::inconclusive;
    else
      status = CheckStatus::pass;
  }
};

namespace detail {

inline SubCheck pass_if(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

inline SubCheck certified(CheckReport& report, const std::optional<HypothesisCertificate>& cert,
                          std::optional<bool> HypothesisCertificate::*field, const std::string& fact) {
  std::optional<bool> value = cert ? (*cert).*field : std::nullopt;
  if (!value) {
    report.missing_facts.push_back(fact);
    return {fact, CheckStatus::missing_certificate, "not certified"};
  }
  return {fact, *value ? CheckStatus::pass : CheckStatus::fail, "certificate: " + cert->source};
}

inline std::string join_primes(const std::vector<BigInt>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ps[i].str();
  return s;
}

}  // namespace detail

/// Every prime dividing the level splits in K.
template <FormLike F>
CheckReport check_heegner(const F& form, const ImagQuadField& K) {
  CheckReport r{"(Heeg.)", form.name()};
  for (const auto& q : PrimeFactorization(form.level()).primes()) {
    auto ell = static_cast<std::int64_t>(q);
    Splitting s = K.splitting_type(ell);
    r.subchecks.push_back(detail::pass_if(q.str() + " split in K", s == Splitting::split,
                                          "kronecker(" + std::to_string(K.disc()) + " | " + q.str() + ") -> " +
                                              to_string(s)));
  }
  r.settle();
  return r;
}

inline CheckReport check_heegner(const EllipticCurveQ& E, const ImagQuadField& K) {
  return check_heegner(CurveForm(E), K);
}

/// p unramified in the coefficient field (Q_p here), p ∤ 6 (2r-1)! N phi(N) h_K, p split in K,
/// a_p a p-adic unit, and a_p^2 ≢ 1 mod p when r = 1.
template <FormLike F>
CheckReport check_admissibility(const F& form, const ImagQuadField& K, std::int64_t p) {
  CheckReport r{"(admiss.)", form.name()};
  const PrimeFactorization N = form.level();
  const int two_r = form.weight();
  const BigInt P = p;
  r.subchecks.push_back(detail::pass_if("p unramified in coefficient field", true, "coefficients in Q_p"));
  r.subchecks.push_back(detail::pass_if("p does not divide 6", 6 % p != 0, "p = " + std::to_string(p)));
  // p ∤ (2r-1)! iff p > 2r - 1.
  r.subchecks.push_back(detail::pass_if("p does not divide (2r-1)!", p > two_r - 1,
                                        "2r - 1 = " + std::to_string(two_r - 1)));
  r.subchecks.push_back(detail::pass_if("p does not divide N", N.value % P != 0, "N = " + N.value.str()));
  const BigInt phi = euler_phi(N.value);
  r.subchecks.push_back(detail::pass_if("p does not divide phi(N)", phi % P != 0, "phi(N) = " + phi.str()));
  r.subchecks.push_back(detail::pass_if("p does not divide h_K", K.class_number() % p != 0,
                                        "h_K = " + std::to_string(K.class_number())));
  r.subchecks.push_back(detail::pass_if("p split in K", K.splitting_type(p) == Splitting::split,
                                        std::string("p is ") + to_string(K.splitting_type(p))));
  if (N.value % P == 0) {
    r.subchecks.push_back({"ordinary at p", CheckStatus::fail, "p divides the level"});
  } else {
    const BigInt ap = form.a_ell(p);
    const std::int64_t ap_mod = mod(ap, p);
    r.subchecks.push_back(detail::pass_if("ordinary at p", ap_mod != 0,
                                          "a_p = " + ap.str() + " = " + std::to_string(ap_mod) + " mod p"));
    if (two_r == 2) {
      const std::int64_t sq = ap_mod * ap_mod % p;
      r.subchecks.push_back(
          detail::pass_if("a_p^2 != 1 mod p", sq != 1, "a_p^2 = " + std::to_string(sq) + " mod p"));
    }
  }
  r.settle();
  return r;
}

inline CheckReport check_admissibility(const EllipticCurveQ& E, const ImagQuadField& K, std::int64_t p) {
  return check_admissibility(CurveForm(E), K, p);
}

/// Sufficient conditions for X(K, A) to have no nonzero finite submodule: y_K of infinite order,
/// index of y_K equal to the p-part of the Tamagawa product, and p split, or p inert with
/// p ∤ #E~(F_{p^2}).
inline CheckReport check_finite_submodule(const CurveForm& E, const ImagQuadField& K, std::int64_t p,
                                          const std::optional<HypothesisCertificate>& cert) {
  CheckReport r{"(no finite submodule)", E.name()};
  r.subchecks.push_back(
      detail::certified(r, cert, &HypothesisCertificate::heegner_point_infinite_order, "heegner_point_infinite_order"));
  r.subchecks.push_back(detail::certified(r, cert, &HypothesisCertificate::heegner_index_equals_tamagawa_p_part,
                                          "heegner_index_equals_tamagawa_p_part"));
  const Splitting sp = K.splitting_type(p);
  if (sp == Splitting::split) {
    r.subchecks.push_back({"case 1: p split in K", CheckStatus::pass, "p is split"});
    r.note = "case 1";
  } else if (sp == Splitting::inert) {
    const BigInt q = BigInt(p) * p;
    const bool ok = E.level().value % p != 0 && reduced_curve_p_torsion_trivial(E.curve(), q, p);
    r.subchecks.push_back(detail::pass_if("case 2: p inert and E~(F_{p^2})[p] = 0", ok, "q = " + q.str()));
    r.note = "case 2";
  } else {
    r.subchecks.push_back({"p split or inert", CheckStatus::fail, "p is ramified in K"});
  }
  r.subchecks.push_back({"Tamagawa product", CheckStatus::pass, "prod c_l = " + E.tamagawa_product().str()});
  r.settle();
  return r;
}

inline CheckReport check_finite_submodule(const EllipticCurveQ& E, const ImagQuadField& K, std::int64_t p,
                                          const std::optional<HypothesisCertificate>& cert) {
  return check_finite_submodule(CurveForm(E), K, p, cert);
}

/// Eigenforms: the finite-submodule hypothesis can only be certified.
inline CheckReport check_finite_submodule_certified(const std::string& subject,
                                                    const std::optional<HypothesisCertificate>& cert) {
  CheckReport r{"(no finite submodule)", subject};
  r.subchecks.push_back(
      detail::certified(r, cert, &HypothesisCertificate::no_finite_submodule, "no_finite_submodule"));
  r.settle();
  return r;
}

/// Co-freeness criterion for Sel(E/K_infty), which forces lambda(E) = 0:
/// (a) E(K)[p] = 0, (b) p ∤ N a_p (a_p - 1) prod c_l, (c) y_K of infinite order,
/// (d) rank E(K) = 1 and Sha(E/K)[p^infty] = 0.
inline CheckReport check_mn19_lambda_zero(const CurveForm& E, const ImagQuadField& K, std::int64_t p,
                                          const std::optional<HypothesisCertificate>& cert) {
  CheckReport r{"(lambda = 0 criterion)", E.name()};
  const BigInt N = E.level().value;
  if (N % p == 0) {
    r.subchecks.push_back({"(a) E(K)[p] = 0", CheckStatus::fail, "p divides N"});
    r.subchecks.push_back({"(b) p does not divide N a_p (a_p - 1) c", CheckStatus::fail, "p divides N"});
  } else {
    auto ev = torsion_p_trivial_over_K(E.curve(), K.disc(), p);
    r.subchecks.push_back({"(a) E(K)[p] = 0",
                           ev.verdict == TorsionVerdict::verified_trivial ? CheckStatus::pass : CheckStatus::inconclusive,
                           "gcd #E(F_q) = " + ev.gcd_curve.str() + ", gcd #E^d(F_q) = " + ev.gcd_twist.str() + " over " +
                               std::to_string(ev.sampled_primes.size()) + " primes"});
    const BigInt ap = E.a_ell(p);
    const BigInt c = E.tamagawa_product();
    const BigInt product = N * ap * (ap - 1) * c;
    r.subchecks.push_back(detail::pass_if("(b) p does not divide N a_p (a_p - 1) c", product % p != 0,
                                          "N = " + N.str() + ", a_p = " + ap.str() + ", c = " + c.str()));
  }
  auto c_check = detail::certified(r, cert, &HypothesisCertificate::heegner_point_infinite_order,
                                   "heegner_point_infinite_order");
  c_check.name = "(c) " + c_check.name;
  r.subchecks.push_back(c_check);
  auto rank = detail::certified(r, cert, &HypothesisCertificate::rank_one, "rank_one");
  rank.name = "(d) " + rank.name;
  r.subchecks.push_back(rank);
  auto sha = detail::certified(r, cert, &HypothesisCertificate::sha_p_trivial, "sha_p_trivial");
  sha.name = "(d) " + sha.name;
  r.subchecks.push_back(sha);
  r.settle();
  if (r.passed()) r.note = "Selmer group co-free: lambda = 0";
  return r;
}

inline CheckReport check_mn19_lambda_zero(const EllipticCurveQ& E, const ImagQuadField& K, std::int64_t p,
                                          const std::optional<HypothesisCertificate>& cert) {
  return check_mn19_lambda_zero(CurveForm(E), K, p, cert);
}

// ---------------------------------------------------------------------------
// The transfer identity

struct LocalLambdaPair {
  std::int64_t ell = 0;
  BigInt lambda_f1 = 0;
  BigInt lambda_f2 = 0;
};

struct TransferResult {
  BigInt lambda_f1 = 0;
  std::vector<LocalLambdaPair> local_table;
  BigInt lambda_f2 = 0;
  std::string formula_trace;
};

/// lambda(f2) = lambda(f1) + 2 sum (lambda_l(f1) - lambda_l(f2)).
inline TransferResult transfer_lambda(const BigInt& lambda_f1, std::vector<LocalLambdaPair> table) {
  if (lambda_f1 < 0) throw InconsistentInvariants("lambda(f1) is negative");
  std::sort(table.begin(), table.end(), [](const auto& x, const auto& y) { return x.ell < y.ell; });
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].ell == table[i - 1].ell) throw IwasawaError("duplicate prime in local table");

  TransferResult out;
  out.lambda_f1 = lambda_f1;
  out.local_table = table;
  BigInt sum1 = 0, sum2 = 0;
  for (const auto& row : table) {
    if (row.lambda_f1 < 0 || row.lambda_f2 < 0) throw InconsistentInvariants("negative local lambda");
    sum1 += row.lambda_f1;
    sum2 += row.lambda_f2;
  }
  out.lambda_f2 = lambda_f1 + 2 * (sum1 - sum2);

  std::ostringstream trace;
  auto terms = [&](bool first) {
    if (table.empty()) return std::string("0");
    std::string s;
    for (std::size_t i = 0; i < table.size(); ++i)
      s += (i ? " + " : "") + (first ? table[i].lambda_f1 : table[i].lambda_f2).str();
    return s;
  };
  std::string primes;
  for (std::size_t i = 0; i < table.size(); ++i) primes += (i ? ", " : "") + std::to_string(table[i].ell);
  trace << "lambda(f1) + 2*sum_{l | N1N2} lambda_l(f1) = lambda(f2) + 2*sum_{l | N1N2} lambda_l(f2), l in {" << primes
        << "}: " << lambda_f1 << " + 2*(" << terms(true) << ") = lambda(f2) + 2*(" << terms(false)
        << ") => lambda(f2) = " << out.lambda_f2;
  out.formula_trace = trace.str();
  if (out.lambda_f2 < 0)
    throw InconsistentInvariants("transfer gives negative lambda(f2) = " + out.lambda_f2.str() + "; " +
                                 out.formula_trace);
  return out;
}

// ---------------------------------------------------------------------------
// Local cokernel dimension of Sel(A[varpi]) -> Sel(A)[varpi]

enum class CokerStatus { computed, not_computed };

inline const char* to_string(CokerStatus s) { return s == CokerStatus::computed ? "computed" : "not_computed"; }

struct CokerDiagnostic {
  std::int64_t ell = 0;
  unsigned dim = 0;
  CokerStatus status = CokerStatus::computed;
  std::string reason;
};

/// dim_F_p A^{I}/p A^{I} at ell: 0 at good primes (A^{I} = A divisible); at multiplicative primes
/// 1 iff p | ord_ell(Delta_min) via the Tate parametrisation; additive primes are not computed.
inline CokerDiagnostic coker_dim_diagnostic(const EllipticCurveQ& E, std::int64_t ell, std::int64_t p) {
  if (ell == p) throw IwasawaError("coker_dim_diagnostic requires ell != p");
  CokerDiagnostic d;
  d.ell = ell;
  const auto data = local_data(E, ell);
  switch (data.reduction) {
    case Reduction::good:
      d.reason = "good reduction: inertia invariants divisible";
      break;
    case Reduction::split_multiplicative:
    case Reduction::nonsplit_multiplicative:
      d.dim = data.ord_min_disc % p == 0 ? 1 : 0;
      d.reason = "multiplicative, ord(Delta_min) = " + std::to_string(data.ord_min_disc);
      break;
    case Reduction::additive:
      d.status = CokerStatus::not_computed;
      d.reason = "additive reduction (" + data.kodaira + ")";
      break;
  }
  return d;
}

}  // namespace lambda_transfer
