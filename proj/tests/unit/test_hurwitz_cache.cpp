#include <doctest.h>

#include <stdexcept>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "ecaliquot/hurwitz_cache.hpp"
#include "ecaliquot/parallel.hpp"

using namespace ecaliquot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ecaliquot-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("in-memory cache returns exact values") {
  HurwitzCache cache;
  CHECK(cache.get(-3) == HurwitzValue{1, 6});
  CHECK(cache.twelfths(-16) == 9);
  CHECK(cache.get(-7) == hurwitz_H(-7));
  CHECK(cache.size() == 3);
  CHECK(cache.flush() == 0);  // nothing to persist
  CHECK_THROWS_AS(cache.get(0), std::invalid_argument);
  CHECK_THROWS_AS(cache.get(4), std::invalid_argument);
}

TEST_CASE("file format: D<TAB>12H, sorted by |D|, round trip") {
  const auto path = scratch("hc.tsv");
  {
    HurwitzCache cache(path);
    for (i64 D : {-40, -3, -23, -4, -16}) cache.get(D);
    CHECK(cache.pending() == 5);
    CHECK(cache.flush() == 5);
    CHECK(cache.pending() == 0);
  }
  CHECK(lines_of(path) == std::vector<std::string>{"-3\t2", "-4\t3", "-16\t9", "-23\t18", "-40\t12"});

  // a second instance picks the values up and merges new ones in order
  {
    HurwitzCache cache(path);
    CHECK(cache.size() == 5);
    CHECK(cache.pending() == 0);
    cache.get(-7);
    cache.get(-3);
    CHECK(cache.pending() == 1);
    cache.flush();
  }
  const auto lines = lines_of(path);
  REQUIRE(lines.size() == 6);
  CHECK(lines[2] == "-7\t6");
  const auto parsed = HurwitzCache::read_file(path);
  for (const auto& [abs_d, twelve_h] : parsed) CHECK(hurwitz_H(-abs_d).twelfths() == twelve_h);
}

TEST_CASE("flush merges with entries written by another instance") {
  const auto path = scratch("merge.tsv");
  HurwitzCache a(path);
  HurwitzCache b(path);
  a.get(-3);
  b.get(-4);
  a.flush();
  b.flush();
  CHECK(HurwitzCache(path).size() == 2);
}

TEST_CASE("malformed cache files are rejected with the line number") {
  const auto path = scratch("bad.tsv");
  for (const char* text : {"-3\t2\n-4 3\n", "-3\t2\nx\t3\n", "3\t2\n", "-3\t-2\n", "-3\t2z\n"}) {
    std::ofstream(path) << text;
    CHECK_THROWS_AS((void)HurwitzCache::read_file(path), std::runtime_error);
    CHECK_THROWS_AS(HurwitzCache{path}, std::runtime_error);
  }
  std::ofstream(path) << "-3\t2\n-4 3\n";
  CHECK_THROWS_WITH((void)HurwitzCache::read_file(path), doctest::Contains(":2"));
}

TEST_CASE("a cache file that contradicts a fresh computation is caught on flush") {
  const auto path = scratch("conflict.tsv");
  HurwitzCache cache(path);
  cache.get(-23);
  std::ofstream(path) << "-23\t35\n";
  CHECK_THROWS_AS(cache.flush(), std::logic_error);
}

TEST_CASE("table-backed lookups agree with direct evaluation") {
  HurwitzCache cache;
  cache.attach_table(std::make_shared<ClassNumberTable>(1000));
  for (i64 D = -1; D >= -1200; --D) REQUIRE(cache.get(D) == hurwitz_H(D));
}

TEST_CASE("concurrent lookups are consistent") {
  HurwitzCache cache;
  std::vector<i64> values(4000);
  parallel_for(values.size(), 8, [&](std::size_t i) { values[i] = cache.twelfths(-static_cast<i64>(i % 1000) - 3); });
  for (std::size_t i = 0; i < values.size(); ++i) REQUIRE(values[i] == hurwitz_H(-static_cast<i64>(i % 1000) - 3).twelfths());
}

TEST_CASE("default_path honours the environment") {
  ::setenv("ECALIQUOT_HCACHE", "/tmp/explicit.tsv", 1);
  CHECK(HurwitzCache::default_path() == fs::path("/tmp/explicit.tsv"));
  ::unsetenv("ECALIQUOT_HCACHE");
  ::setenv("XDG_DATA_HOME", "/tmp/xdg", 1);
  CHECK(HurwitzCache::default_path() == fs::path("/tmp/xdg/ecaliquot/hcache.tsv"));
  ::unsetenv("XDG_DATA_HOME");
  CHECK(HurwitzCache::default_path().filename() == "hcache.tsv");
}
