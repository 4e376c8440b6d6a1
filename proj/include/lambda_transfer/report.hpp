#pragma once
// JSON renderings of library results. Integers that may exceed 64 bits are emitted as decimal strings.

#include "ingest.hpp"

namespace lambda_transfer {

inline constexpr const char* kSchema = "lambda-transfer/1";

inline json to_json(const PrimeFactorization& f) {
  json j;
  j["value"] = f.value.str();
  j["factors"] = json::array();
  for (const auto& [q, e] : f.factors) j["factors"].push_back({{"prime", q.str()}, {"exponent", e}});
  return j;
}

inline json to_json(const LocalReductionData& d) {
  return {{"ell", d.ell},
          {"reduction", to_string(d.reduction)},
          {"kodaira", d.kodaira},
          {"conductor_exponent", d.conductor_exponent},
          {"tamagawa", d.tamagawa},
          {"ord_min_disc", d.ord_min_disc}};
}

inline json to_json(const TorsionEvidence& ev) {
  return {{"verdict", to_string(ev.verdict)},
          {"sampled_primes", ev.sampled_primes},
          {"gcd_curve", ev.gcd_curve.str()},
          {"gcd_twist", ev.gcd_twist.str()}};
}

inline json to_json(const PolyModP& f) {
  return {{"p", f.modulus()}, {"coeffs", f.coeffs()}};
}

inline std::string render_poly(const PolyModP& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    auto c = f.coeffs()[i];
    if (c == 0) continue;
    std::string term = i == 0 ? std::to_string(c)
                              : (c == 1 ? "" : std::to_string(c)) + (i == 1 ? "X" : "X^" + std::to_string(i));
    s += (s.empty() ? "" : " + ") + term;
  }
  return s + " (mod " + std::to_string(f.modulus()) + ")";
}

inline json to_json(const EulerFactorData& f) {
  return {{"ell", f.ell}, {"kind", to_string(f.kind)}, {"a_ell", f.a_ell.str()}, {"poly", to_json(f.poly)},
          {"poly_text", render_poly(f.poly)}};
}

inline json to_json(const BrinkResult& b) {
  return {{"ell", b.ell},
          {"p", b.p},
          {"target", b.target.str()},
          {"a", b.rep.first.str()},
          {"b", b.rep.second.str()},
          {"astar", b.astar.str()},
          {"bstar", b.bstar.str()},
          {"t", b.t},
          {"s_ell", b.s_ell.str()},
          {"recipe_based", b.recipe_based},
          {"unit_valuation_warning", b.unit_valuation_warning}};
}

inline json to_json(const LocalLambdaData& d) {
  json j{{"ell", d.ell},
         {"euler_factor", to_json(d.factor)},
         {"d_ell", d.d_ell},
         {"s_ell", d.s_ell.str()},
         {"s_source", to_string(d.s_source)},
         {"lambda_ell", d.lambda_ell.str()}};
  j["brink"] = d.brink ? to_json(*d.brink) : json(nullptr);
  return j;
}

inline json to_json(const CongruenceReport& r) {
  json j{{"p", r.p},
         {"weight", r.weight},
         {"sturm_bound", r.sturm_bound.str()},
         {"level_used", r.level_used.str()},
         {"level_choice", to_string(r.level_choice)},
         {"verdict", to_string(r.verdict)}};
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"ell", c.ell}, {"kind", to_string(c.kind)}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  return j;
}

inline json to_json(const CheckReport& r) {
  json j{{"hypothesis", r.hypothesis}, {"subject", r.subject}, {"status", to_string(r.status)}, {"note", r.note}};
  j["subchecks"] = json::array();
  for (const auto& s : r.subchecks)
    j["subchecks"].push_back({{"name", s.name}, {"status", to_string(s.status)}, {"detail", s.detail}});
  j["missing_facts"] = r.missing_facts;
  return j;
}

inline json to_json(const TransferResult& t) {
  json j{{"lambda_f1", t.lambda_f1.str()}, {"lambda_f2", t.lambda_f2.str()}, {"formula_trace", t.formula_trace}};
  j["local_table"] = json::array();
  for (const auto& row : t.local_table)
    j["local_table"].push_back({{"ell", row.ell}, {"lambda_ell_f1", row.lambda_f1.str()}, {"lambda_ell_f2", row.lambda_f2.str()}});
  return j;
}

inline json to_json(const CokerDiagnostic& d) {
  return {{"ell", d.ell}, {"dim", d.dim}, {"status", to_string(d.status)}, {"reason", d.reason}};
}

}  // namespace lambda_transfer
