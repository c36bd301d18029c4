// Copyright 2026 The rinq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Structure download with an on-disk cache. Network access happens only on a
// cache miss; writes go to a temporary file that is renamed into place so a
// concurrent reader never sees a partial structure.

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include <httplib.h>

#include "rinq/error.hpp"

namespace rinq {

inline constexpr const char* kDefaultPdbMirror = "https://files.rcsb.org/download";

inline bool is_valid_pdb_id(const std::string& id) {
  static const std::regex pattern("[0-9][A-Za-z0-9]{3}");
  return std::regex_match(id, pattern);
}

inline std::string normalize_pdb_id(std::string id) {
  if (!is_valid_pdb_id(id)) throw UsageError("invalid PDB id '" + id + "'");
  for (char& c : id) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return id;
}

inline std::filesystem::path cache_path(const std::filesystem::path& cache_dir,
                                        const std::string& pdb_id) {
  return cache_dir / (normalize_pdb_id(pdb_id) + ".pdb");
}

/// Mirror base URL: RINQ_PDB_MIRROR when set, otherwise RCSB.
inline std::string pdb_mirror_from_env() {
  if (const char* env = std::getenv("RINQ_PDB_MIRROR"); env && *env) return env;
  return kDefaultPdbMirror;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return ss.str();
}

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("mirror URL lacks a scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_begin);
  out.path = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

inline void write_atomically(const std::filesystem::path& target, const std::string& body) {
  static std::atomic<unsigned long> counter{0};
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw IoError("cannot create cache directory '" + target.parent_path().string() + "'");
  auto tmp = target;
  tmp += ".tmp." + std::to_string(std::random_device{}()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << body;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move structure into cache at '" + target.string() + "'");
  }
}

}  // namespace detail

/// Returns the PDB text for `pdb_id`, downloading `{mirror}/{ID}.pdb` into
/// `{cache_dir}/{ID}.pdb` on a cache miss.
inline std::string fetch_pdb(const std::string& pdb_id, const std::filesystem::path& cache_dir,
                             std::optional<std::string> mirror = std::nullopt) {
  const std::string id = normalize_pdb_id(pdb_id);
  const auto target = cache_dir / (id + ".pdb");
  if (std::filesystem::exists(target)) return read_file(target);

  const auto url = detail::split_url(mirror.value_or(pdb_mirror_from_env()));
  httplib::Client client(url.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  auto res = client.Get(url.path + "/" + id + ".pdb");
  if (!res)
    throw FetchError(0, "download of " + id + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw FetchError(res->status,
                     "download of " + id + " returned HTTP " + std::to_string(res->status));
  detail::write_atomically(target, res->body);
  return res->body;
}

}  // namespace rinq
