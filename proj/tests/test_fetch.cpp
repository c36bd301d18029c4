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

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>

#include "local_mirror.hpp"
#include "rinq/fetch.hpp"
#include "support.hpp"

using namespace rinq;
namespace fs = std::filesystem;

TEST_CASE("PDB id validation") {
  CHECK(is_valid_pdb_id("1XY1"));
  CHECK(is_valid_pdb_id("6rqs"));
  CHECK_FALSE(is_valid_pdb_id("XY11"));
  CHECK_FALSE(is_valid_pdb_id("1XY"));
  CHECK_FALSE(is_valid_pdb_id("1XY1.pdb"));
  CHECK(normalize_pdb_id("6rqs") == "6RQS");
  CHECK_THROWS_AS(normalize_pdb_id("../x"), UsageError);
  CHECK(cache_path("/c", "1xy1") == fs::path("/c/1XY1.pdb"));
}

TEST_CASE("mirror URL splitting") {
  const auto u = detail::split_url("https://files.rcsb.org/download/");
  CHECK(u.origin == "https://files.rcsb.org");
  CHECK(u.path == "/download");
  CHECK(detail::split_url("http://h:8080").path.empty());
  CHECK_THROWS_AS(detail::split_url("files.rcsb.org"), UsageError);
}

TEST_CASE("download fills the cache, later calls stay offline") {
  const std::string body = testing::fixture_text("1XY1");
  testing::TempDir dir;
  std::string first;
  {
    testing::LocalMirror mirror({{"1XY1", body}});
    first = fetch_pdb("1xy1", dir.path(), mirror.url());
    CHECK(mirror.hits() == 1);
    CHECK(fetch_pdb("1XY1", dir.path(), mirror.url()) == body);
    CHECK(mirror.hits() == 1);
  }
  CHECK(first == body);
  CHECK(read_file(dir.path() / "1XY1.pdb") == body);
  // Mirror gone; the cache still answers.
  CHECK(fetch_pdb("1XY1", dir.path(), "http://127.0.0.1:9") == body);
  for (const auto& entry : fs::directory_iterator(dir.path()))
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("missing entries and dead mirrors raise fetch errors") {
  testing::TempDir dir;
  testing::LocalMirror mirror({});
  try {
    fetch_pdb("9ZZZ", dir.path(), mirror.url());
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    CHECK(e.status() == 404);
  }
  CHECK_FALSE(fs::exists(dir.path() / "9ZZZ.pdb"));
  try {
    fetch_pdb("9ZZZ", dir.path(), "http://127.0.0.1:9/download");
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    CHECK(e.status() == 0);
  }
}

TEST_CASE("mirror comes from the environment") {
  ::setenv("RINQ_PDB_MIRROR", "http://example.invalid/pdb", 1);
  CHECK(pdb_mirror_from_env() == "http://example.invalid/pdb");
  ::unsetenv("RINQ_PDB_MIRROR");
  CHECK(pdb_mirror_from_env() == kDefaultPdbMirror);
}

TEST_CASE("read_file reports missing files") {
  CHECK_THROWS_AS(read_file("/nonexistent/rinq/file.pdb"), IoError);
}
