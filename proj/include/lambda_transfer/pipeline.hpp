#pragma once
// Command implementations shared by the CLI and the integration tests. Each command returns a
// machine report, a text rendering and an exit code:
//   0 success, 1 hypothesis failure, 2 input error, 3 inconclusive or missing certificate.

#include <set>

#include "remote.hpp"
#include "report.hpp"

namespace lambda_transfer {

enum class Emit { text, json };

struct RunConfig {
  std::int64_t p = 5;
  std::int64_t D = 51;
  bool offline = false;
  bool strict_congruence = true;
  LevelChoice level_choice = LevelChoice::lcm;
  Emit emit = Emit::text;
  bool audit_brink = false;
  RemoteConfig remote;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kSuccess = 0, kHypothesisFailure = 1, kInputError = 2, kInconclusive = 3 };

struct FormInput {
  std::string name;
  std::variant<CurveForm, EigenformView> form;
  std::optional<HypothesisCertificate> certificate;
  RecordSource source = RecordSource::user;

  [[nodiscard]] bool is_curve() const { return std::holds_alternative<CurveForm>(form); }
  [[nodiscard]] const CurveForm& curve() const { return std::get<CurveForm>(form); }
  [[nodiscard]] PrimeFactorization level() const {
    return std::visit([](const auto& f) { return PrimeFactorization(f.level()); }, form);
  }
};

struct CommandResult {
  json report;
  std::string text;
  int exit_code = kSuccess;

  [[nodiscard]] std::string render(Emit emit) const { return emit == Emit::json ? report.dump(2) + "\n" : text; }
};

inline FormInput make_input(const Record& record) {
  return std::visit(
      [](const auto& rec) -> FormInput {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, CurveRecord>) {
          CurveForm form(rec.curve());
          return {form.name(), std::move(form), rec.certificate, rec.source};
        } else {
          EigenformView view(rec.form);
          return {view.name(), std::move(view), rec.certificate, rec.source};
        }
      },
      record);
}

/// A path to a record file, or a curve label resolved via fixtures, cache and (unless offline) remote.
inline FormInput load_input(const std::string& arg, const RunConfig& cfg) {
  try {
    if (std::filesystem::is_regular_file(arg)) return make_input(load_record(arg));
    RemoteConfig remote = cfg.remote;
    remote.offline = remote.offline || cfg.offline;
    return make_input(resolve_label(arg, remote));
  } catch (const IngestError& e) {
    throw InputError(e.what());
  } catch (const RemoteError& e) {
    throw InputError(e.what());
  } catch (const CurveError& e) {
    throw InputError(e.what());
  }
}

namespace detail {

inline json input_json(const FormInput& in) {
  json j{{"name", in.name}, {"source", to_string(in.source)}};
  if (in.is_curve()) {
    j["kind"] = "curve";
    j["ainvs"] = json::array();
    for (const auto& a : in.curve().curve().ainvs()) j["ainvs"].push_back(a.str());
  } else {
    const auto& f = std::get<EigenformView>(in.form).form();
    j["kind"] = "eigenform";
    j["weight"] = f.weight;
  }
  j["level"] = in.level().value.str();
  j["certificate"] = in.certificate ? certificate_to_json(*in.certificate) : json(nullptr);
  return j;
}

inline json config_json(const RunConfig& cfg, const ImagQuadField* K) {
  json j{{"p", cfg.p},
         {"D", cfg.D},
         {"level_choice", to_string(cfg.level_choice)},
         {"strict_congruence", cfg.strict_congruence},
         {"audit_brink", cfg.audit_brink},
         {"offline", cfg.offline}};
  if (K) {
    j["disc"] = K->disc();
    j["class_number"] = K->class_number();
  }
  return j;
}

inline json base_report(const std::string& command, const RunConfig& cfg, const ImagQuadField* K) {
  return {{"schema", kSchema}, {"command", command}, {"config", config_json(cfg, K)}};
}

inline void text_check(std::ostringstream& out, const CheckReport& r) {
  out << "  " << r.hypothesis << " " << r.subject << ": " << to_string(r.status);
  if (!r.note.empty()) out << " [" << r.note << "]";
  out << "\n";
  for (const auto& s : r.subchecks) out << "      - " << s.name << ": " << to_string(s.status) << " (" << s.detail << ")\n";
}

inline CheckReport guarded(const std::string& hypothesis, const std::string& subject,
                           const std::function<CheckReport()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    CheckReport r{hypothesis, subject};
    r.subchecks.push_back({"evaluation", CheckStatus::inconclusive, e.what()});
    r.settle();
    return r;
  }
}

inline CheckReport irreducibility_check(const FormInput& in, const ImagQuadField& K, std::int64_t p) {
  CheckReport r{"(irred.)", in.name};
  r.subchecks.push_back(certified(r, in.certificate, &HypothesisCertificate::residually_irreducible,
                                  "residually_irreducible"));
  if (in.is_curve() && p > 2 && in.level().value % p != 0) {
    try {
      auto ev = torsion_p_trivial_over_K(in.curve().curve(), K.disc(), p);
      r.note = std::string("supporting evidence: E(K)[p] ") + to_string(ev.verdict);
    } catch (const std::exception& e) {
      r.note = std::string("no torsion evidence: ") + e.what();
    }
  }
  r.settle();
  return r;
}

inline CheckReport congruence_check(const CongruenceReport& c, bool strict, const std::string& subject) {
  CheckReport r{"(congruence)", subject};
  CheckStatus s = CheckStatus::pass;
  if (c.verdict == CongruenceVerdict::fail)
    s = CheckStatus::fail;
  else if (c.verdict == CongruenceVerdict::pass_with_skips && strict)
    s = CheckStatus::inconclusive;
  std::string failing;
  for (const auto& chk : c.checks)
    if (!chk.pass) failing += (failing.empty() ? "" : ", ") + std::to_string(chk.ell);
  r.subchecks.push_back({"a_l comparison up to Sturm bound " + c.sturm_bound.str(), s,
                         std::string("verdict ") + to_string(c.verdict) + ", level " + c.level_used.str() +
                             (failing.empty() ? "" : ", failing l = " + failing)});
  r.settle();
  return r;
}

inline CheckReport mu_check(const FormInput& in, const std::vector<const CheckReport*>& prerequisites) {
  CheckReport r{"(mu = 0)", in.name};
  CheckStatus derived = CheckStatus::pass;
  std::string parts;
  for (const auto* c : prerequisites) {
    parts += (parts.empty() ? "" : ", ") + c->hypothesis + " " + to_string(c->status);
    if (c->status == CheckStatus::fail)
      derived = CheckStatus::fail;
    else if (c->status != CheckStatus::pass && derived != CheckStatus::fail)
      derived = c->status;
  }
  if (derived == CheckStatus::pass) {
    r.subchecks.push_back({"mu = 0 from (Heeg.), (admiss.), (irred.), congruence", CheckStatus::pass, parts});
    r.note = "derived";
  } else if (in.certificate && in.certificate->mu_zero == true) {
    r.subchecks.push_back({"mu = 0", CheckStatus::pass, "certificate: " + in.certificate->source});
    r.note = "certificate";
  } else {
    r.subchecks.push_back({"mu = 0 from (Heeg.), (admiss.), (irred.), congruence", derived, parts});
  }
  r.settle();
  return r;
}

inline int exit_code_for(const std::vector<CheckReport>& checks, std::vector<std::string>& messages) {
  int code = kSuccess;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::pass) continue;
    std::string failing;
    for (const auto& s : c.subchecks)
      if (s.status != CheckStatus::pass) failing += (failing.empty() ? "" : "; ") + s.name + " (" + s.detail + ")";
    messages.push_back(c.hypothesis + " " + to_string(c.status) + " for " + c.subject + ": " + failing);
    if (c.status == CheckStatus::fail)
      code = kHypothesisFailure;
    else if (code == kSuccess)
      code = kInconclusive;
  }
  return code;
}

template <class Fn>
decltype(auto) with_form(const FormInput& in, Fn&& fn) {
  return std::visit(std::forward<Fn>(fn), in.form);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CommandResult cmd_inspect(const FormInput& in, const RunConfig& cfg) {
  CommandResult out;
  std::optional<ImagQuadField> K;
  try {
    K.emplace(cfg.D);
  } catch (const FieldError&) {
  }
  out.report = detail::base_report("inspect", cfg, K ? &*K : nullptr);
  out.report["input"] = detail::input_json(in);
  std::ostringstream text;
  text << "inspect " << in.name << "\n";
  if (in.is_curve()) {
    const CurveForm& f = in.curve();
    const EllipticCurveQ& E = f.curve();
    json j;
    j["discriminant"] = E.discriminant().str();
    j["conductor"] = to_json(f.level());
    j["local_data"] = json::array();
    for (const auto& d : f.bad_primes()) j["local_data"].push_back(to_json(d));
    j["tamagawa_product"] = f.tamagawa_product().str();
    text << "  discriminant " << E.discriminant() << "\n  conductor " << f.level().value << "\n";
    for (const auto& d : f.bad_primes())
      text << "    l = " << d.ell << ": " << to_string(d.reduction) << ", " << d.kodaira << ", f = " << d.conductor_exponent
           << ", c = " << d.tamagawa << ", ord(Delta_min) = " << d.ord_min_disc << "\n";
    text << "  Tamagawa product " << f.tamagawa_product() << "\n";
    if (f.level().value % cfg.p != 0) {
      BigInt ap = f.a_ell(cfg.p);
      j["a_p"] = ap.str();
      text << "  a_" << cfg.p << " = " << ap << "\n";
      if (K && cfg.p > 2) {
        try {
          auto ev = torsion_p_trivial_over_K(E, K->disc(), cfg.p);
          j["torsion_over_K"] = to_json(ev);
          text << "  E(K)[" << cfg.p << "]: " << to_string(ev.verdict) << " (gcd " << ev.gcd_curve << ", twist gcd "
               << ev.gcd_twist << ")\n";
        } catch (const CurveError& e) {
          j["torsion_over_K"] = {{"error", e.what()}};
        }
      }
    } else {
      j["a_p"] = f.a_ell(cfg.p).str();
      text << "  p divides the conductor\n";
    }
    j["coker_dim"] = json::array();
    for (const auto& d : f.bad_primes()) {
      if (d.ell == cfg.p) continue;
      auto diag = coker_dim_diagnostic(E, d.ell, cfg.p);
      j["coker_dim"].push_back(to_json(diag));
      text << "  local cokernel dimension at " << d.ell << ": " << diag.dim << " (" << to_string(diag.status) << ")\n";
    }
    out.report["curve"] = j;
  } else {
    const Eigenform& f = std::get<EigenformView>(in.form).form();
    json j{{"level", f.level.str()}, {"weight", f.weight}};
    j["bad_prime_kinds"] = json::object();
    for (const auto& [ell, k] : f.bad_prime_kinds) j["bad_prime_kinds"][std::to_string(ell)] = to_string(k);
    j["coefficient_count"] = f.a_coeffs.size();
    out.report["eigenform"] = j;
    text << "  level " << f.level << ", weight " << f.weight << ", " << f.a_coeffs.size() << " coefficients\n";
  }
  out.report["exit_code"] = out.exit_code;
  out.text = text.str();
  return out;
}

inline CommandResult cmd_congruent(const FormInput& f1, const FormInput& f2, const RunConfig& cfg) {
  CommandResult out;
  out.report = detail::base_report("congruent", cfg, nullptr);
  out.report["inputs"] = {detail::input_json(f1), detail::input_json(f2)};
  std::ostringstream text;
  auto report = std::visit([&](const auto& a, const auto& b) { return check_congruence(a, b, cfg.p, cfg.level_choice); },
                           f1.form, f2.form);
  out.report["congruence"] = to_json(report);
  text << "congruence " << f1.name << " ~ " << f2.name << " mod " << cfg.p << ": " << to_string(report.verdict) << "\n"
       << "  level " << report.level_used << " (" << to_string(report.level_choice) << "), Sturm bound "
       << report.sturm_bound << ", " << report.checks.size() << " primes checked\n";
  for (const auto& c : report.checks)
    if (!c.pass || c.kind != CheckKind::good_good)
      text << "    l = " << c.ell << " " << to_string(c.kind) << ": " << c.lhs << " vs " << c.rhs << (c.pass ? " ok" : " FAIL")
           << "\n";
  if (report.verdict == CongruenceVerdict::fail)
    out.exit_code = kHypothesisFailure;
  else if (report.verdict == CongruenceVerdict::pass_with_skips && cfg.strict_congruence)
    out.exit_code = kInconclusive;
  out.report["exit_code"] = out.exit_code;
  out.text = text.str();
  return out;
}

inline CommandResult cmd_euler(const FormInput& in, const RunConfig& cfg, std::vector<std::int64_t> ells = {}) {
  const ImagQuadField K(cfg.D);
  CommandResult out;
  out.report = detail::base_report("euler", cfg, &K);
  out.report["input"] = detail::input_json(in);
  if (ells.empty())
    for (const auto& q : in.level().primes()) ells.push_back(static_cast<std::int64_t>(q));
  std::sort(ells.begin(), ells.end());
  ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
  std::ostringstream text;
  text << "Euler factors of " << in.name << " at p = " << cfg.p << ", K = Q(sqrt(-" << cfg.D << "))\n";
  out.report["local"] = json::array();
  for (auto ell : ells) {
    try {
      auto data = detail::with_form(in, [&](const auto& f) { return local_lambda(f, K, ell, cfg.p, cfg.audit_brink); });
      out.report["local"].push_back(to_json(data));
      text << "  l = " << ell << ": " << to_string(data.factor.kind) << ", P(X) = " << render_poly(data.factor.poly)
           << ", d = " << data.d_ell << ", s = " << data.s_ell << " (" << to_string(data.s_source)
           << "), lambda_l = " << data.lambda_ell << "\n";
    } catch (const std::exception& e) {
      out.report["local"].push_back({{"ell", ell}, {"error", e.what()}});
      text << "  l = " << ell << ": " << e.what() << "\n";
      out.exit_code = kHypothesisFailure;
    }
  }
  out.report["exit_code"] = out.exit_code;
  out.text = text.str();
  return out;
}

inline CommandResult cmd_brink(std::int64_t ell, const RunConfig& cfg) {
  const ImagQuadField K(cfg.D);
  CommandResult out;
  out.report = detail::base_report("brink", cfg, &K);
  auto b = brink_s_ell(K, ell, cfg.p);
  out.report["brink"] = to_json(b);
  std::ostringstream text;
  text << "K = Q(sqrt(-" << cfg.D << ")), h_K = " << K.class_number() << ", l = " << ell << ", p = " << cfg.p << "\n"
       << "  " << b.target << " = a^2 + ab + " << K.omega_norm() << " b^2 with (a, b) = (" << b.rep.first << ", "
       << b.rep.second << ")\n"
       << "  (a + b w)^" << cfg.p - 1 << " = " << b.astar << " + (" << b.bstar << ") w\n"
       << "  v_p(b*) = " << b.t << ", s_l = " << b.s_ell << "\n";
  if (b.recipe_based) text << "  note: class number != 2, recipe-based value\n";
  if (b.unit_valuation_warning) text << "  warning: p does not divide b*\n";
  out.report["exit_code"] = out.exit_code;
  out.text = text.str();
  return out;
}

namespace detail {

struct FormDossier {
  CheckReport heegner, admissibility, irreducibility, finite_submodule;
  std::optional<CheckReport> lambda_zero;  // curves only
};

inline FormDossier form_dossier(const FormInput& in, const ImagQuadField& K, std::int64_t p) {
  FormDossier d;
  d.heegner = guarded("(Heeg.)", in.name, [&] { return with_form(in, [&](const auto& f) { return check_heegner(f, K); }); });
  d.admissibility = guarded("(admiss.)", in.name,
                            [&] { return with_form(in, [&](const auto& f) { return check_admissibility(f, K, p); }); });
  d.irreducibility = irreducibility_check(in, K, p);
  if (in.is_curve()) {
    d.finite_submodule = guarded("(no finite submodule)", in.name,
                                 [&] { return check_finite_submodule(in.curve(), K, p, in.certificate); });
    d.lambda_zero = guarded("(lambda = 0 criterion)", in.name,
                            [&] { return check_mn19_lambda_zero(in.curve(), K, p, in.certificate); });
    if (!d.finite_submodule.passed() && d.lambda_zero->passed()) {
      d.finite_submodule.status = CheckStatus::pass;
      d.finite_submodule.note = "implied by co-free Selmer group";
    } else if (!d.finite_submodule.passed() && in.certificate && in.certificate->no_finite_submodule == true) {
      d.finite_submodule.status = CheckStatus::pass;
      d.finite_submodule.note = "certificate";
    }
  } else {
    d.finite_submodule = check_finite_submodule_certified(in.name, in.certificate);
  }
  return d;
}

}  // namespace detail

inline CommandResult cmd_verify(const std::vector<FormInput>& inputs, const RunConfig& cfg) {
  if (inputs.empty() || inputs.size() > 2) throw InputError("verify takes one or two inputs");
  const ImagQuadField K(cfg.D);
  CommandResult out;
  out.report = detail::base_report("verify", cfg, &K);
  std::vector<CheckReport> checks;
  out.report["inputs"] = json::array();
  out.report["lambda_zero_criterion"] = json::array();
  std::vector<CheckReport> criteria;
  for (const auto& in : inputs) {
    out.report["inputs"].push_back(detail::input_json(in));
    auto d = detail::form_dossier(in, K, cfg.p);
    checks.insert(checks.end(), {d.heegner, d.admissibility, d.irreducibility, d.finite_submodule});
    if (d.lambda_zero) {
      criteria.push_back(*d.lambda_zero);
      out.report["lambda_zero_criterion"].push_back(to_json(*d.lambda_zero));
    }
  }
  if (inputs.size() == 2) {
    checks.push_back(detail::guarded("(congruence)", inputs[0].name + " ~ " + inputs[1].name, [&] {
      auto c = std::visit([&](const auto& a, const auto& b) { return check_congruence(a, b, cfg.p, cfg.level_choice); },
                          inputs[0].form, inputs[1].form);
      return detail::congruence_check(c, cfg.strict_congruence, inputs[0].name + " ~ " + inputs[1].name);
    }));
  }
  std::vector<std::string> messages;
  out.exit_code = detail::exit_code_for(checks, messages);
  std::ostringstream text;
  text << "hypotheses at p = " << cfg.p << ", K = Q(sqrt(-" << cfg.D << ")), h_K = " << K.class_number() << "\n";
  out.report["hypotheses"] = json::array();
  for (const auto& c : checks) {
    out.report["hypotheses"].push_back(to_json(c));
    detail::text_check(text, c);
  }
  if (!criteria.empty()) text << "lambda = 0 criterion (informational):\n";
  for (const auto& c : criteria) detail::text_check(text, c);
  out.report["messages"] = messages;
  out.report["exit_code"] = out.exit_code;
  for (const auto& m : messages) text << "! " << m << "\n";
  out.text = text.str();
  return out;
}

/// Full pipeline: hypotheses for both forms, congruence, lambda(f1), local invariants, transfer.
inline CommandResult cmd_transfer(const FormInput& f1, const FormInput& f2, const RunConfig& cfg) {
  const ImagQuadField K(cfg.D);
  CommandResult out;
  out.report = detail::base_report("transfer", cfg, &K);
  out.report["inputs"] = {detail::input_json(f1), detail::input_json(f2)};
  std::ostringstream text;
  text << "lambda transfer " << f1.name << " -> " << f2.name << " at p = " << cfg.p << ", K = Q(sqrt(-" << cfg.D
       << ")), disc " << K.disc() << ", h_K = " << K.class_number() << "\n";

  auto d1 = detail::form_dossier(f1, K, cfg.p);
  auto d2 = detail::form_dossier(f2, K, cfg.p);

  std::optional<CongruenceReport> congruence;
  CheckReport cong_check = detail::guarded("(congruence)", f1.name + " ~ " + f2.name, [&] {
    congruence = std::visit([&](const auto& a, const auto& b) { return check_congruence(a, b, cfg.p, cfg.level_choice); },
                            f1.form, f2.form);
    return detail::congruence_check(*congruence, cfg.strict_congruence, f1.name + " ~ " + f2.name);
  });

  CheckReport mu1 = detail::mu_check(f1, {&d1.heegner, &d1.admissibility, &d1.irreducibility, &cong_check});
  CheckReport mu2 = detail::mu_check(f2, {&d2.heegner, &d2.admissibility, &d2.irreducibility, &cong_check});

  // lambda(f1): co-freeness criterion, else certificate.
  CheckReport lambda1{"(lambda(f1))", f1.name};
  BigInt lambda_f1 = 0;
  if (d1.lambda_zero && d1.lambda_zero->passed()) {
    lambda1.subchecks.push_back({"lambda(f1) = 0", CheckStatus::pass, "co-free Selmer group criterion"});
    lambda1.note = "computed";
  } else if (f1.certificate && f1.certificate->lambda_known) {
    lambda_f1 = *f1.certificate->lambda_known;
    lambda1.subchecks.push_back(
        {"lambda(f1) = " + lambda_f1.str(), CheckStatus::pass, "certificate: " + f1.certificate->source});
    lambda1.note = "certificate";
  } else {
    lambda1.missing_facts.push_back("lambda_known");
    lambda1.subchecks.push_back({"lambda_known", CheckStatus::missing_certificate,
                                 "co-freeness criterion not met and no certified lambda(f1)"});
  }
  lambda1.settle();

  std::vector<CheckReport> checks{d1.heegner,          d2.heegner,          d1.admissibility, d2.admissibility,
                                  d1.irreducibility,   d2.irreducibility,   cong_check,       mu1,
                                  mu2,                 d1.finite_submodule, d2.finite_submodule, lambda1};
  std::vector<std::string> messages;
  out.exit_code = detail::exit_code_for(checks, messages);

  out.report["hypotheses"] = json::array();
  text << "hypotheses:\n";
  for (const auto& c : checks) {
    out.report["hypotheses"].push_back(to_json(c));
    detail::text_check(text, c);
  }
  out.report["lambda_zero_criterion"] = d1.lambda_zero ? to_json(*d1.lambda_zero) : json(nullptr);
  out.report["congruence"] = congruence ? to_json(*congruence) : json(nullptr);
  if (congruence)
    text << "congruence: " << to_string(congruence->verdict) << " up to Sturm bound " << congruence->sturm_bound
         << " at level " << congruence->level_used << " (" << to_string(congruence->level_choice) << ")\n";

  // Local invariants at l | N1 N2 (requires every such l split in K).
  std::set<std::int64_t> primes;
  for (const auto* in : {&f1, &f2})
    for (const auto& q : in->level().primes()) primes.insert(static_cast<std::int64_t>(q));
  std::vector<LocalLambdaPair> table;
  out.report["local_lambda"] = json::array();
  if (d1.heegner.passed() && d2.heegner.passed() && !primes.count(cfg.p)) {
    text << "local invariants:\n";
    for (auto ell : primes) {
      try {
        auto l1 = detail::with_form(f1, [&](const auto& f) { return local_lambda(f, K, ell, cfg.p, cfg.audit_brink); });
        auto l2 = detail::with_form(f2, [&](const auto& f) { return local_lambda(f, K, ell, cfg.p, cfg.audit_brink); });
        table.push_back({ell, l1.lambda_ell, l2.lambda_ell});
        out.report["local_lambda"].push_back({{"ell", ell}, {"f1", to_json(l1)}, {"f2", to_json(l2)}});
        for (const auto& [nm, l] : {std::pair{f1.name, &l1}, std::pair{f2.name, &l2}}) {
          text << "  l = " << ell << ", " << nm << ": " << to_string(l->factor.kind) << ", P(X) = " << render_poly(l->factor.poly)
               << ", root l^-1 = " << inverse_mod(ell, cfg.p) << ", d = " << l->d_ell << ", s = " << l->s_ell << " ("
               << to_string(l->s_source) << "), lambda_l = " << l->lambda_ell << "\n";
          if (l->brink)
            text << "      s_l via (" << l->brink->rep.first << " + " << l->brink->rep.second << " w)^" << cfg.p - 1 << " = "
                 << l->brink->astar << " + (" << l->brink->bstar << ") w, t = " << l->brink->t
                 << (l->brink->recipe_based ? " [recipe-based]" : "") << "\n";
        }
      } catch (const std::exception& e) {
        messages.push_back("local invariants at " + std::to_string(ell) + ": " + e.what());
        out.exit_code = out.exit_code == kSuccess ? kInconclusive : out.exit_code;
      }
    }
  }

  out.report["transfer"] = nullptr;
  if (out.exit_code == kSuccess) {
    try {
      auto result = transfer_lambda(lambda_f1, table);
      out.report["transfer"] = to_json(result);
      text << result.formula_trace << "\n";
      text << "lambda(" << f2.name << ") = " << result.lambda_f2 << "\n";
      if (f1.is_curve() == false || f2.is_curve() == false) {
        for (const auto* in : {&f1, &f2})
          if (!in->is_curve() && std::get<EigenformView>(in->form).weight() > 2)
            messages.push_back(in->name + ": weight > 2, Euler factor normalization-sensitive");
      }
    } catch (const InconsistentInvariants& e) {
      messages.push_back(std::string("inconsistent invariants: ") + e.what());
      out.exit_code = kHypothesisFailure;
    }
  }
  for (const auto& m : messages) text << "! " << m << "\n";
  out.report["messages"] = messages;
  out.report["exit_code"] = out.exit_code;
  out.text = text.str();
  return out;
}

}  // namespace lambda_transfer
