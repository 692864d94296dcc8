#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using ceq::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coulomb_eq_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve on the triangle") {
  const Run r = run({"solve", "--space", "polygon:3", "--charges", "1,1,1"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["points"].size() == 5);
  CHECK(doc["summary"]["minima"] == 2);
  CHECK(doc["manifest"]["command"] == "solve");

  const Run s = run({"solve", "--space", "polygon:3", "--charges", "0.125,1,1"});
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["points"].size() == 3);
}

TEST_CASE("solve on the torus") {
  const Run r = run({"solve", "--space", "torus:1,2,3", "--charges", "1,1,100"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["points"].size() == 4);
  CHECK(doc["summary"]["exact"] == true);
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(run({"solve", "--space", "polygon:2", "--charges", "1,1"}).code == 2);
  CHECK(run({"solve", "--space", "polygon:3", "--charges", "1,1"}).code == 2);
  CHECK(run({"solve", "--space", "polygon:3", "--charges", "1,0,1"}).code == 2);
  CHECK(run({"solve", "--space", "polygon:3", "--charges", "1,1,1", "--potential", "power:0.5"}).code == 2);
  CHECK(run({"solve", "--space", "polygon:3", "--charges", "1,1,1", "--grid-density", "3"}).code == 2);
  CHECK(run({"solve", "--charges", "1,1,1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const fs::path dir = scratch("badpath");
  CHECK(run({"bifurcate", "--space", "polygon:3", "--path", "q2:0.5:0.9", "--out-dir", dir.string()}).code == 2);
  CHECK(run({"bifurcate", "--space", "polygon:3", "--path", "q9:0.1:0.9", "--out-dir", dir.string()}).code == 2);
  CHECK(run({"inverse", "--sides", "1,1"}).code == 2);
  CHECK(run({"inverse", "--points", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("bifurcate writes curves, branches and the threshold") {
  const fs::path dir = scratch("bifurcate");
  const Run r = run({"bifurcate", "--space", "polygon:3", "--charges", "1,1,1", "--path", "q2:0.2:0.3", "--steps",
                     "41", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("threshold: 0.25") != std::string::npos);
  for (const char* f : {"curves.csv", "branches.csv", "bifurcation.json", "manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto summary = nlohmann::json::parse(slurp(dir / "bifurcation.json"));
  CHECK(std::abs(summary["threshold"]["lambda_c"].get<double>() - 0.25) < 1e-4);
  CHECK(slurp(dir / "branches.csv").rfind("lambda,q1,q2,q3,branch,amplitude,energy,stability\n", 0) == 0);
}

TEST_CASE("bifurcate on the torus without a path") {
  const fs::path dir = scratch("torus_curves");
  const Run r = run({"bifurcate", "--space", "torus:1,2,3", "--resolution", "20", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "curves.csv"));
  CHECK_FALSE(fs::exists(dir / "branches.csv"));
  CHECK(run({"bifurcate", "--space", "torus:1,1,3", "--out-dir", dir.string()}).code == 2);
}

TEST_CASE("inverse") {
  const Run r = run({"inverse", "--sides", "3,4,5"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["kind"] == "unique-ray");
  CHECK(doc["verification"]["passed"] == true);

  const Run bad = run({"inverse", "--sides", "1,1,3"});
  CHECK(bad.code == 0);
  CHECK(nlohmann::json::parse(bad.out)["kind"] == "infeasible");

  const fs::path dir = scratch("inverse");
  std::ofstream(dir / "torus.json") << R"({"space": "torus", "radii": [1, 1, 1], "angles": [2.0943951023931957, 2.0943951023931957]})";
  const Run t = run({"inverse", "--points", (dir / "torus.json").string()});
  REQUIRE(t.code == 0);
  const auto tj = nlohmann::json::parse(t.out);
  CHECK(tj["kind"] == "unique-ray");
  CHECK(std::abs(tj["charges"][0].get<double>() - 1.0 / 3.0) < 1e-12);

  CHECK(run({"inverse", "--sides", "3,4,5", "--points", (dir / "torus.json").string()}).code == 2);
}

TEST_CASE("output is byte-identical across thread counts") {
  const std::vector<std::string> base{"solve", "--space", "polygon:4", "--charges", "1,0.7,1.3,0.9",
                                      "--grid-density", "8"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  const Run a = run(one);
  const Run b = run(four);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
}
