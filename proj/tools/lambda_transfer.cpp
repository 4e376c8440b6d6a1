#include <iostream>

#include <CLI11.hpp>

#include "lambda_transfer/pipeline.hpp"

namespace lt = lambda_transfer;

int main(int argc, char** argv) {
  CLI::App app{"lambda-transfer: Iwasawa lambda-invariant transfer across congruent forms"};
  app.require_subcommand(1);
  app.fallthrough();

  lt::RunConfig cfg;
  std::string emit = "text", level = "lcm", cache_dir;
  bool lenient = false;
  app.add_option("--p", cfg.p, "prime p")->capture_default_str();
  app.add_option("--D", cfg.D, "K = Q(sqrt(-D))")->capture_default_str();
  app.add_flag("--offline", cfg.offline, "never contact the remote database");
  app.add_option("--emit", emit, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--level", level, "Sturm bound level")->check(CLI::IsMember({"lcm", "product"}))->capture_default_str();
  app.add_flag("--audit-brink", cfg.audit_brink, "compute s_l even when d_l = 0");
  app.add_option("--cache-dir", cache_dir, "cache directory");
  app.add_flag("--lenient-congruence", lenient, "accept congruences with skipped additive primes");

  std::vector<std::string> inputs;
  std::vector<std::int64_t> ells;
  std::int64_t ell = 0;

  auto* inspect = app.add_subcommand("inspect", "reduction data, a_p, torsion evidence");
  inspect->add_option("input", inputs, "label or record file")->required()->expected(1);
  auto* congruent = app.add_subcommand("congruent", "check f1 = f2 mod p up to the Sturm bound");
  congruent->add_option("inputs", inputs, "two labels or record files")->required()->expected(2);
  auto* euler = app.add_subcommand("euler", "Euler factors mod p and local lambda invariants");
  euler->add_option("input", inputs, "label or record file")->required()->expected(1);
  euler->add_option("--ell", ells, "primes l (default: primes dividing the level)");
  auto* brink = app.add_subcommand("brink", "s_l from the norm form of K");
  brink->add_option("ell", ell, "split prime l")->required();
  auto* verify = app.add_subcommand("verify", "hypothesis dossier for one or two forms");
  verify->add_option("inputs", inputs, "labels or record files")->required()->expected(1, 2);
  auto* transfer = app.add_subcommand("transfer", "lambda(f2) from lambda(f1)");
  transfer->add_option("inputs", inputs, "f1 f2")->required()->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : lt::kInputError;
  }

  cfg.emit = emit == "json" ? lt::Emit::json : lt::Emit::text;
  cfg.level_choice = level == "product" ? lt::LevelChoice::product : lt::LevelChoice::lcm;
  cfg.strict_congruence = !lenient;
  cfg.remote.offline = cfg.offline;
  if (!cache_dir.empty()) cfg.remote.cache_dir = cache_dir;

  try {
    if (cfg.p < 2 || !lt::is_prime(cfg.p)) throw lt::InputError("--p must be prime");
    if (cfg.D <= 0) throw lt::InputError("--D must be positive");
    std::vector<lt::FormInput> forms;
    for (const auto& s : inputs) forms.push_back(lt::load_input(s, cfg));

    lt::CommandResult result;
    if (*inspect)
      result = lt::cmd_inspect(forms[0], cfg);
    else if (*congruent)
      result = lt::cmd_congruent(forms[0], forms[1], cfg);
    else if (*euler)
      result = lt::cmd_euler(forms[0], cfg, ells);
    else if (*brink)
      result = lt::cmd_brink(ell, cfg);
    else if (*verify)
      result = lt::cmd_verify(forms, cfg);
    else
      result = lt::cmd_transfer(forms[0], forms[1], cfg);
    std::cout << result.render(cfg.emit);
    return result.exit_code;
  } catch (const lt::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const lt::FieldError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const lt::ArithmeticError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const lt::IwasawaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lt::kHypothesisFailure;
  }
  return lt::kInputError;
}
