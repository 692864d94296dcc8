#include "coulomb_eq/io.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <sstream>

using namespace ceq;

TEST_CASE("doubles round-trip through their text form") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::exp(u(rng)) * (i % 2 ? 1 : -1);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("hashing") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("configurations round-trip through JSON") {
  const std::vector<Point> pts{Point(0, 0), Point(0.4, 0), Point(0.1, 0.3), Point(-0.2, 0.25)};
  const Configuration poly = PolygonConfig::from_points(pts);
  const Configuration back = config_from_json(nlohmann::json::parse(to_json(poly).dump()));
  CHECK(config_distance(poly, back) == 0.0);

  const Configuration torus = TorusConfig({1, 2, 3}, 0.7, -2.1);
  const nlohmann::json j = to_json(torus);
  CHECK(j["space"] == "torus");
  CHECK(config_distance(torus, config_from_json(nlohmann::json::parse(j.dump()))) == 0.0);

  const nlohmann::json two_angles = {{"space", "torus"}, {"radii", {1, 2, 3}}, {"angles", {0.5, 0.5}}};
  CHECK(std::get<TorusConfig>(config_from_json(two_angles)).alpha2() == 0.5);
  const nlohmann::json bad_sum = {{"space", "torus"}, {"radii", {1, 2, 3}}, {"angles", {0.5, 0.5, 0.5}}};
  CHECK_THROWS(config_from_json(bad_sum));
  CHECK_THROWS(config_from_json(nlohmann::json{{"space", "sphere"}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"space", "polygon"}, {"points", {{0, 0}, {1, 0}}}}));
}

TEST_CASE("critical point and solve document fields") {
  const ChargeVector q({1.0, 1.0, 1.0});
  const SolveResult r = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb());
  const MorseSummary s = euler_count_check(r.points, PolygonSpace{3});
  const nlohmann::json doc = solve_document(PolygonSpace{3}, q, PotentialSpec::coulomb(), r, s);
  CHECK(doc["space"] == "polygon:3");
  CHECK(doc["points"].size() == 5);
  CHECK(doc["summary"]["euler"] == "pass");
  for (const auto& p : doc["points"]) {
    for (const char* key : {"coords", "energy", "grad_norm", "stationarity_residual", "eigenvalues", "index",
                            "aligned", "degenerate", "partner", "key"}) {
      CHECK(p.contains(key));
    }
  }
}

TEST_CASE("CSV headers") {
  const auto curves = polygon_bifurcation_set(16);
  const std::string csv = curves_csv(curves);
  CHECK(csv.rfind("curve,label,q1,q2,q3\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 16);
  const BranchDiagram empty;
  CHECK(branch_csv(empty) == "lambda,q1,q2,q3,branch,amplitude,energy,stability\n");
}

TEST_CASE("manifest") {
  const nlohmann::json args = {{"space", "polygon:3"}, {"charges", {1, 1, 1}}};
  const RunManifest a = RunManifest::make("solve", args);
  const RunManifest b = RunManifest::make("solve", args);
  CHECK(a.input_hash == b.input_hash);
  CHECK(a.input_hash.size() == 16);
  CHECK(RunManifest::make("solve", {{"space", "polygon:4"}}).input_hash != a.input_hash);
  const nlohmann::json j = a.to_json();
  CHECK(j["version"] == std::string(kToolVersion));
  CHECK(j["command"] == "solve");
}
