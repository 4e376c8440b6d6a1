#pragma once
// Curve-database HTTP client with an on-disk, checksummed cache.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"

namespace lambda_transfer {

class RemoteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

class NotFound : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

class CacheCorrupt : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

inline std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("LAMBDA_TRANSFER_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "lambda-transfer";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "lambda-transfer";
  return ".lambda-transfer-cache";
}

struct RemoteConfig {
  std::string base_url = "https://www.lmfdb.org";
  /// "{label}" is replaced by the curve label.
  std::string path_template = "/api/ec_curvedata/?Clabel={label}&_format=json&_fields=Clabel,ainvs,conductor";
  std::filesystem::path cache_dir = default_cache_dir();
  bool offline = false;
  std::chrono::milliseconds timeout{10'000};
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

/// FNV-1a 64-bit, rendered as "fnv1a64:" + 16 hex digits.
inline std::string checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

namespace detail {

inline void require_safe_label(const std::string& label) {
  if (label.empty() || !std::all_of(label.begin(), label.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
      }))
    throw NotFound("invalid curve label \"" + label + "\"");
}

// Exclusive lock file held for the lifetime of the guard.
class CacheLock {
 public:
  explicit CacheLock(std::filesystem::path path) : path_(std::move(path)) {
    using namespace std::chrono_literals;
    const auto deadline = std::chrono::steady_clock::now() + 10s;
    while (true) {
      int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        ::close(fd);
        return;
      }
      if (std::chrono::steady_clock::now() > deadline) throw RemoteError("timed out waiting for " + path_.string());
      std::this_thread::sleep_for(10ms);
    }
  }
  ~CacheLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

inline std::filesystem::path cache_path(const RemoteConfig& cfg, const std::string& label) {
  return cfg.cache_dir / (label + ".json");
}

inline std::string cache_entry_string(const CurveRecord& rec) {
  json record = record_to_json(rec);
  json entry;
  entry["checksum"] = checksum(record.dump());
  entry["record"] = record;
  return entry.dump(2) + "\n";
}

/// Cached record for label, or nullopt; throws CacheCorrupt on checksum or format mismatch.
inline std::optional<CurveRecord> read_cache(const RemoteConfig& cfg, const std::string& label) {
  detail::require_safe_label(label);
  const auto path = cache_path(cfg, label);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::string text = detail::read_file(path);
  try {
    json entry = json::parse(text);
    const json& record = entry.at("record");
    if (entry.at("checksum").get<std::string>() != checksum(record.dump()))
      throw CacheCorrupt("checksum mismatch in " + path.string());
    auto rec = std::get<CurveRecord>(record_from_json(record, {}, RecordSource::remote));
    if (rec.label != label) throw CacheCorrupt("cache entry " + path.string() + " holds label " + rec.label);
    return rec;
  } catch (const CacheCorrupt&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheCorrupt("unreadable cache entry " + path.string() + ": " + e.what());
  }
}

inline void write_cache(const RemoteConfig& cfg, const CurveRecord& rec) {
  detail::require_safe_label(rec.label);
  std::filesystem::create_directories(cfg.cache_dir);
  detail::CacheLock lock(cfg.cache_dir / (rec.label + ".lock"));
  const auto path = cache_path(cfg, rec.label);
  const auto tmp = cfg.cache_dir / (rec.label + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << cache_entry_string(rec);
    if (!out) throw RemoteError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Accepts either the database API shape {"data": [{"ainvs": [...], ...}]} or a bare record.
inline CurveRecord parse_remote_response(const std::string& body, const std::string& label) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("remote response: ") + e.what());
  }
  json rec_json;
  if (j.is_object() && j.contains("data")) {
    const auto& data = j.at("data");
    if (!data.is_array() || data.empty()) throw NotFound("no curve with label " + label);
    rec_json = data.at(0);
  } else {
    rec_json = j;
  }
  if (!rec_json.is_object() || !rec_json.contains("ainvs")) throw ParseError("remote response has no ainvs");
  json normalized;
  normalized["label"] = label;
  normalized["ainvs"] = json::array();
  for (const auto& a : rec_json.at("ainvs")) {
    if (a.is_number_float()) throw ParseError("remote a-invariant lost precision (floating point)");
    normalized["ainvs"].push_back(a.is_string() ? a : json(detail::parse_integer(a, "ainv", 0).str()));
  }
  if (rec_json.contains("conductor")) normalized["conductor"] = rec_json.at("conductor");
  normalized["source"] = "remote";
  auto rec = std::get<CurveRecord>(record_from_json(normalized, {}, RecordSource::remote));
  return rec;
}

/// Cache first; otherwise HTTP GET with exponential backoff, then cache the validated record.
inline CurveRecord fetch_remote(const std::string& label, const RemoteConfig& cfg) {
  detail::require_safe_label(label);
  if (auto cached = read_cache(cfg, label)) return *cached;
  if (cfg.offline) throw NotFound("no cached record for " + label + " (offline)");

  httplib::Client client(cfg.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  std::string path = cfg.path_template;
  if (auto pos = path.find("{label}"); pos != std::string::npos) path.replace(pos, 7, label);

  std::string last_error = "no attempts made";
  auto backoff = cfg.initial_backoff;
  for (int attempt = 0; attempt < cfg.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Get(path);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 404) throw NotFound("no curve with label " + label);
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw NetworkError("HTTP " + std::to_string(res->status) + " for " + label);
    CurveRecord rec = parse_remote_response(res->body, label);
    write_cache(cfg, rec);
    return rec;
  }
  throw NetworkError("fetching " + label + " from " + cfg.base_url + " failed: " + last_error);
}

/// Bundled fixture, then cache, then (unless offline) the remote database.
inline CurveRecord resolve_label(const std::string& label, const RemoteConfig& cfg) {
  if (auto rec = fixtures::bundled(label)) return *rec;
  return fetch_remote(label, cfg);
}

}  // namespace lambda_transfer
