#pragma once
// Record files for curves and eigenforms (JSON with integers carried as decimal strings).

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "iwasawa.hpp"

namespace lambda_transfer {

using json = nlohmann::json;

class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

class ParseError : public IngestError {
 public:
  using IngestError::IngestError;
};

class ValidationError : public IngestError {
 public:
  using IngestError::IngestError;
};

enum class RecordSource { fixture, remote, user };

inline const char* to_string(RecordSource s) {
  switch (s) {
    case RecordSource::fixture: return "fixture";
    case RecordSource::remote: return "remote";
    case RecordSource::user: return "user";
  }
  return "?";
}

struct CurveRecord {
  std::string label;
  std::array<BigInt, 5> ainvs;
  std::optional<HypothesisCertificate> certificate;
  RecordSource source = RecordSource::user;

  [[nodiscard]] EllipticCurveQ curve() const {
    return EllipticCurveQ(ainvs, label.empty() ? std::nullopt : std::optional<std::string>(label));
  }
  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

struct EigenformRecord {
  Eigenform form;
  std::optional<HypothesisCertificate> certificate;
  RecordSource source = RecordSource::user;

  friend bool operator==(const EigenformRecord& a, const EigenformRecord& b) {
    return a.form.label == b.form.label && a.form.level == b.form.level && a.form.weight == b.form.weight &&
           a.form.a_coeffs == b.form.a_coeffs && a.form.bad_prime_kinds == b.form.bad_prime_kinds &&
           a.certificate == b.certificate && a.source == b.source;
  }
};

using Record = std::variant<CurveRecord, EigenformRecord>;

namespace detail {

// 1-based line of the first occurrence of "key" in text, 0 if absent.
inline int line_of_key(std::string_view text, std::string_view key) {
  std::string needle = "\"" + std::string(key) + "\"";
  auto pos = text.find(needle);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline BigInt parse_integer(const json& j, const std::string& what, int line) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
  if (!j.is_string()) throw ValidationError(what + " must be an integer or a decimal string", line);
  const auto& s = j.get_ref<const std::string&>();
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (s.size() == start || !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                                        [](char c) { return c >= '0' && c <= '9'; }))
    throw ValidationError(what + " is not a decimal integer: \"" + s + "\"", line);
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

inline std::optional<bool> optional_bool(const json& obj, const char* key, std::string_view text) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_boolean()) throw ValidationError(std::string(key) + " must be a boolean", line_of_key(text, key));
  return obj.at(key).get<bool>();
}

inline LocalKind parse_kind(const std::string& s, int line) {
  if (s == "good") return LocalKind::good;
  if (s == "bad_multiplicative" || s == "multiplicative") return LocalKind::bad_multiplicative;
  if (s == "bad_additive" || s == "additive") return LocalKind::bad_additive;
  throw ValidationError("unknown prime kind \"" + s + "\"", line);
}

inline RecordSource parse_source(const std::string& s, int line) {
  if (s == "fixture") return RecordSource::fixture;
  if (s == "remote") return RecordSource::remote;
  if (s == "user") return RecordSource::user;
  throw ValidationError("unknown record source \"" + s + "\"", line);
}

}  // namespace detail

inline HypothesisCertificate certificate_from_json(const json& c, std::string_view text = {}) {
  if (!c.is_object()) throw ValidationError("certificate must be an object", detail::line_of_key(text, "certificate"));
  HypothesisCertificate cert;
  cert.rank_one = detail::optional_bool(c, "rank_one", text);
  cert.heegner_point_infinite_order = detail::optional_bool(c, "heegner_point_infinite_order", text);
  cert.heegner_index_equals_tamagawa_p_part = detail::optional_bool(c, "heegner_index_equals_tamagawa_p_part", text);
  cert.sha_p_trivial = detail::optional_bool(c, "sha_p_trivial", text);
  cert.mu_zero = detail::optional_bool(c, "mu_zero", text);
  cert.residually_irreducible = detail::optional_bool(c, "residually_irreducible", text);
  cert.no_finite_submodule = detail::optional_bool(c, "no_finite_submodule", text);
  if (c.contains("lambda_known") && !c.at("lambda_known").is_null()) {
    const auto& v = c.at("lambda_known");
    if (!v.is_number_unsigned()) throw ValidationError("lambda_known must be a non-negative integer", detail::line_of_key(text, "lambda_known"));
    cert.lambda_known = v.get<std::uint64_t>();
  }
  if (!c.contains("source") || !c.at("source").is_string() || c.at("source").get<std::string>().empty())
    throw ValidationError("certificate requires a non-empty source", detail::line_of_key(text, "certificate"));
  cert.source = c.at("source").get<std::string>();
  if (cert.lambda_known && cert.mu_zero != true)
    throw ValidationError("lambda_known requires mu_zero = true", detail::line_of_key(text, "lambda_known"));
  return cert;
}

inline json certificate_to_json(const HypothesisCertificate& cert) {
  json c = json::object();
  auto put = [&](const char* key, const std::optional<bool>& v) {
    if (v) c[key] = *v;
  };
  put("rank_one", cert.rank_one);
  put("heegner_point_infinite_order", cert.heegner_point_infinite_order);
  put("heegner_index_equals_tamagawa_p_part", cert.heegner_index_equals_tamagawa_p_part);
  put("sha_p_trivial", cert.sha_p_trivial);
  put("mu_zero", cert.mu_zero);
  put("residually_irreducible", cert.residually_irreducible);
  put("no_finite_submodule", cert.no_finite_submodule);
  if (cert.lambda_known) c["lambda_known"] = *cert.lambda_known;
  c["source"] = cert.source;
  return c;
}

/// Builds and validates a record; `text` (the original file contents) is used for line numbers.
inline Record record_from_json(const json& j, std::string_view text = {}, RecordSource default_source = RecordSource::user) {
  using detail::line_of_key;
  if (!j.is_object()) throw ValidationError("record must be a JSON object", 1);
  std::optional<HypothesisCertificate> cert;
  if (j.contains("certificate") && !j.at("certificate").is_null()) cert = certificate_from_json(j.at("certificate"), text);
  RecordSource source = default_source;
  if (j.contains("source")) {
    if (!j.at("source").is_string()) throw ValidationError("source must be a string", line_of_key(text, "source"));
    source = detail::parse_source(j.at("source").get<std::string>(), line_of_key(text, "source"));
  }
  std::string label;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw ValidationError("label must be a string", line_of_key(text, "label"));
    label = j.at("label").get<std::string>();
  }

  if (j.contains("ainvs")) {
    const int line = line_of_key(text, "ainvs");
    const auto& arr = j.at("ainvs");
    if (!arr.is_array() || arr.size() != 5) throw ValidationError("ainvs must be an array of 5 integers", line);
    CurveRecord rec;
    rec.label = label;
    rec.source = source;
    rec.certificate = cert;
    for (std::size_t i = 0; i < 5; ++i) rec.ainvs[i] = detail::parse_integer(arr[i], "ainvs[" + std::to_string(i) + "]", line);
    if (source == RecordSource::remote && rec.label.empty()) throw ValidationError("remote records need a label", line);
    try {
      EllipticCurveQ E(rec.ainvs);
      if (j.contains("conductor")) {
        const int cline = line_of_key(text, "conductor");
        BigInt claimed = detail::parse_integer(j.at("conductor"), "conductor", cline);
        BigInt computed = conductor(E).value;
        if (claimed != computed)
          throw ValidationError("conductor field " + claimed.str() + " disagrees with Tate's algorithm (" + computed.str() + ")", cline);
      }
    } catch (const CurveError& e) {
      throw ValidationError(e.what(), line);
    }
    return rec;
  }

  if (j.contains("level")) {
    EigenformRecord rec;
    rec.source = source;
    rec.certificate = cert;
    Eigenform& f = rec.form;
    f.label = label;
    const int lline = line_of_key(text, "level");
    f.level = detail::parse_integer(j.at("level"), "level", lline);
    if (f.level < 1) throw ValidationError("level must be positive", lline);
    const int wline = line_of_key(text, "weight");
    if (!j.contains("weight") || !j.at("weight").is_number_integer()) throw ValidationError("weight must be an integer", wline);
    f.weight = j.at("weight").get<int>();
    if (f.weight < 2 || f.weight % 2 != 0) throw ValidationError("weight must be even and at least 2", wline);

    const int kline = line_of_key(text, "bad_prime_kinds");
    if (j.contains("bad_prime_kinds")) {
      if (!j.at("bad_prime_kinds").is_object()) throw ValidationError("bad_prime_kinds must be an object", kline);
      for (const auto& [key, value] : j.at("bad_prime_kinds").items()) {
        BigInt q = detail::parse_integer(json(key), "bad prime", kline);
        if (!value.is_string()) throw ValidationError("prime kind must be a string", kline);
        if (q < 2 || f.level % q != 0 || !is_prime(q))
          throw ValidationError("bad prime " + key + " does not divide the level", kline);
        f.bad_prime_kinds[static_cast<std::int64_t>(q)] = detail::parse_kind(value.get<std::string>(), kline);
      }
    }
    for (const auto& q : factorize(f.level).primes()) {
      auto ell = static_cast<std::int64_t>(q);
      auto it = f.bad_prime_kinds.find(ell);
      if (it == f.bad_prime_kinds.end() || it->second == LocalKind::good)
        throw ValidationError("prime " + q.str() + " divides the level but has no bad-prime kind", kline ? kline : lline);
    }

    const int aline = line_of_key(text, "a_coeffs");
    if (j.contains("a_coeffs")) {
      if (!j.at("a_coeffs").is_object()) throw ValidationError("a_coeffs must be an object", aline);
      for (const auto& [key, value] : j.at("a_coeffs").items()) {
        BigInt q = detail::parse_integer(json(key), "coefficient index", aline);
        if (q < 2 || !is_prime(q)) throw ValidationError("coefficient index " + key + " is not prime", aline);
        BigInt a = detail::parse_integer(value, "a_" + key, aline);
        auto ell = static_cast<std::int64_t>(q);
        if (f.level % q != 0) {
          // |a_l| <= 2 l^((k-1)/2)  <=>  a_l^2 <= 4 l^(k-1)
          if (a * a > 4 * boost::multiprecision::pow(q, static_cast<unsigned>(f.weight - 1)))
            throw ValidationError("a_" + key + " = " + a.str() + " violates the Ramanujan-Petersson bound", aline);
        }
        f.a_coeffs[ell] = a;
      }
    }
    return rec;
  }

  throw ValidationError("record has neither ainvs nor level", 1);
}

inline json record_to_json(const Record& record) {
  json j;
  std::visit(
      [&](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, CurveRecord>) {
          j["label"] = rec.label;
          j["ainvs"] = json::array();
          for (const auto& a : rec.ainvs) j["ainvs"].push_back(a.str());
        } else {
          j["kind"] = "eigenform";
          j["label"] = rec.form.label;
          j["level"] = rec.form.level.str();
          j["weight"] = rec.form.weight;
          j["a_coeffs"] = json::object();
          for (const auto& [ell, a] : rec.form.a_coeffs) j["a_coeffs"][std::to_string(ell)] = a.str();
          j["bad_prime_kinds"] = json::object();
          for (const auto& [ell, k] : rec.form.bad_prime_kinds) j["bad_prime_kinds"][std::to_string(ell)] = to_string(k);
        }
        if (rec.certificate) j["certificate"] = certificate_to_json(*rec.certificate);
        j["source"] = to_string(rec.source);
      },
      record);
  return j;
}

inline std::string save_record_string(const Record& record) { return record_to_json(record).dump(2) + "\n"; }

inline Record parse_record(std::string_view text, RecordSource default_source = RecordSource::user) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  return record_from_json(j, text, default_source);
}

inline Record load_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_record(buf.str());
  } catch (const IngestError& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(path.string() + ": " + e.what());
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void save_record(const Record& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot write " + path.string());
  out << save_record_string(record);
}

}  // namespace lambda_transfer
