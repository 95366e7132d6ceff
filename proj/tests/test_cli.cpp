#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("CONELIGHT_BIN");
  return b ? b : "./conelight";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("conelight_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

// Runs the CLI with stdout captured in dir/stdout.txt and returns the exit code.
int run(const std::string& args, const fs::path& dir) {
  const std::string cmd =
      bin() + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

nlohmann::json report(const fs::path& p) { return nlohmann::json::parse(read(p)); }

}  // namespace

TEST_CASE("field: usage errors, row count and byte determinism") {
  const fs::path d = scratch("field");
  write(d / "empty.json", R"({"grid": {"mags": []}})");
  CHECK(run("field --config " + (d / "empty.json").string() + " --out " + (d / "e").string(), d) == 2);
  write(d / "unknown.json", R"({"grid": {"magz": [1]}})");
  CHECK(run("field --config " + (d / "unknown.json").string(), d) == 2);
  CHECK(run("field --no-such-flag", d) == 2);

  write(d / "grid.json", R"({"grid": {"mags": [1, 10, 100], "direction_count": 2}})");
  REQUIRE(run("field --config " + (d / "grid.json").string() + " --out " + (d / "a").string(), d) == 0);
  const std::string a = read(d / "a" / "field.csv");
  CHECK(lines(a) == 1 + 6);
  CHECK(a.rfind("mag,nx,ny,nz,re0,im0,", 0) == 0);
  const std::string ja = read(d / "a" / "field.json");
  REQUIRE(run("field --config " + (d / "grid.json").string() + " --out " + (d / "a").string(), d) == 0);
  CHECK(read(d / "a" / "field.csv") == a);
  CHECK(read(d / "a" / "field.json") == ja);
}

TEST_CASE("decay: synthetic slope and inverted window") {
  const fs::path d = scratch("decay");
  REQUIRE(run("decay --synthetic=-2 --out " + d.string(), d) == 0);
  const nlohmann::json r = report(d / "decay.json");
  CHECK(r["command"] == "decay");
  CHECK(r["results"]["slope"].get<double>() == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(lines(read(d / "decay.csv")) == 1 + 8);
  write(d / "inv.json", R"({"decay": {"lambda_min": 300, "lambda_max": 10}})");
  CHECK(run("decay --synthetic=-2 --config " + (d / "inv.json").string() + " --out " + d.string(), d) == 2);
}

TEST_CASE("limit-scan: a single s gives a single row and no fit") {
  const fs::path d = scratch("scan");
  write(d / "one.json", R"({"limit_scan": {"s_ladder": [1]}})");
  REQUIRE(run("limit-scan --config " + (d / "one.json").string() + " --out " + d.string(), d) == 0);
  const nlohmann::json r = report(d / "limit-scan.json")["results"];
  CHECK(r["rows"].size() == 1);
  CHECK_FALSE(r.contains("gauge_bridge_fit"));
  CHECK(lines(read(d / "limit_scan.csv")) == 2);
  write(d / "bad.json", R"({"limit_scan": {"s_ladder": [4, 2]}})");
  CHECK(run("limit-scan --config " + (d / "bad.json").string() + " --out " + d.string(), d) == 2);
}

TEST_CASE("huygens: probes outside the shifted cone are rejected") {
  const fs::path d = scratch("huygens");
  write(d / "outside.json", R"({"huygens": {"probes": [{"centre": [1, 0, 0, 0], "radius": 0.5, "pol": [1, 0, 0]}]}})");
  CHECK(run("huygens --config " + (d / "outside.json").string() + " --out " + d.string(), d) == 2);
  CHECK(read(d / "stderr.txt").find("leaves V+ + t") != std::string::npos);
  write(d / "inside.json", R"({"huygens": {"probes": [{"centre": [26, 2, 0, 0], "radius": 0.5, "pol": [0, 1, 0]}]}})");
  REQUIRE(run("huygens --config " + (d / "inside.json").string() + " --out " + d.string(), d) == 0);
  const nlohmann::json r = report(d / "huygens.json")["results"];
  CHECK(r["probes"].size() == 1);
  CHECK(r["self_test_zero"] == true);
}

TEST_CASE("suite: list, single criterion and reproducible reports") {
  const fs::path d = scratch("suite");
  REQUIRE(run("suite --list --out " + (d / "l").string(), d) == 0);
  const std::string listing = read(d / "stdout.txt");
  CHECK(lines(listing) == 10);
  for (const char* id : {"decay", "l1", "ir", "bridge", "constancy", "huygens", "continuity", "weyl", "cocycle",
                         "determinism"})
    CHECK(listing.find(id) != std::string::npos);
  CHECK_FALSE(fs::exists(d / "l" / "suite.json"));

  REQUIRE(run("suite --only=continuity --out " + (d / "a").string(), d) == 0);
  const nlohmann::json r = report(d / "a" / "suite.json");
  CHECK(r["results"].size() == 1);
  CHECK(r["results"][0]["id"] == "continuity");
  CHECK(r["results"][0]["pass"] == true);
  CHECK(r["config_digest"].get<std::string>().size() == 64);
  const std::string first = read(d / "a" / "suite.json");
  REQUIRE(run("suite --only=continuity --out " + (d / "a").string(), d) == 0);
  CHECK(read(d / "a" / "suite.json") == first);

  // The seed is part of the digest.
  REQUIRE(run("suite --only=continuity --seed 7 --out " + (d / "a").string(), d) == 0);
  CHECK(report(d / "a" / "suite.json")["config_digest"] != r["config_digest"]);
  CHECK(run("suite --only=nonsense --out " + (d / "x").string(), d) == 2);
}
