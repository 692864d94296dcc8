#include "coulomb_eq/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ceq;

namespace {

std::size_t count_minima(const SolveResult& r) {
  std::size_t n = 0;
  for (const auto& p : r.points) n += (!p.degenerate && p.morse_index == 0) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("space parsing") {
  CHECK(std::get<PolygonSpace>(parse_space("polygon:4")).n == 4);
  CHECK(std::get<TorusSpace>(parse_space("torus:1,2,3")).radii[2] == 3.0);
  CHECK(space_name(parse_space("polygon:3")) == "polygon:3");
  CHECK(charge_count(parse_space("torus:1,2,3")) == 3);
  CHECK_THROWS(parse_space("polygon:2"));
  CHECK_THROWS(parse_space("torus:1,2"));
  CHECK_THROWS(parse_space("torus:1,-2,3"));
  CHECK_THROWS(parse_space("sphere:3"));
}

TEST_CASE("settings validation") {
  SolveSettings s;
  CHECK_NOTHROW(s.validate());
  s.grid_density = 2;
  CHECK_THROWS(s.validate());
  s = SolveSettings{};
  s.newton_tol = 0.0;
  CHECK_THROWS(s.validate());
  s = SolveSettings{};
  s.max_iters = 0;
  CHECK_THROWS(s.validate());
}

TEST_CASE("aligned segments of three charges") {
  const ChargeVector q({4.0, 1.0, 1.0});
  const auto segs = solve_line_three(q);
  const PolygonConfig& mid2 = segs[1];
  const auto d = pairwise_distances(mid2);
  CHECK(d(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(d(1, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(d(0, 2) == doctest::Approx(0.5).epsilon(1e-13));
  for (const auto& s : segs) {
    CHECK(alignment_defect(s) == 0.0);
    CHECK(std::abs(s.perimeter() - 1.0) < 1e-13);
    // Critical on the plane: the chart gradient vanishes.
    CHECK(gradient(Configuration(s), q, PotentialSpec::coulomb()).norm() < 1e-11);
  }
  CHECK(line_minimum_index(q) == 1);
  CHECK(line_minimum_index(ChargeVector({1.0, 2.0, 0.5})) == 2);
}

TEST_CASE("aligned segments are critical for random charges (finite-difference oracle)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const ChargeVector q({u(rng), u(rng), u(rng)});
    for (const auto& s : solve_line_three(q)) {
      CHECK(fd_gradient(s, q, PotentialSpec::coulomb(), default_fd_step(s)).norm() < 1e-7 * q.max_abs() * q.max_abs());
    }
  }
}

TEST_CASE("critical triangle") {
  const auto eq = critical_triangle(ChargeVector({1.0, 1.0, 1.0}));
  REQUIRE(eq.has_value());
  const auto d = pairwise_distances(*eq);
  CHECK(d(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(d(1, 2) == doctest::Approx(1.0 / 3.0));
  CHECK((*eq)[2].y() > 0.0);

  const ChargeVector q({1.0, 1.0, 4.0});
  const auto t = critical_triangle(q);
  REQUIRE(t.has_value());
  const auto e = pairwise_distances(*t);
  // d23 : d31 : d12 = 1 : 1 : 1/2
  CHECK(e(1, 2) / e(0, 1) == doctest::Approx(2.0));
  CHECK(e(0, 2) / e(0, 1) == doctest::Approx(2.0));
  CHECK(gradient(Configuration(*t), q, PotentialSpec::coulomb()).norm() < 1e-11);

  CHECK_FALSE(critical_triangle(ChargeVector({0.125, 1.0, 1.0})).has_value());
}

TEST_CASE("aligned torus configurations") {
  const Space sp = TorusSpace{{1, 2, 3}};
  const ChargeVector q({1.0, 1.0, 1.0});
  const auto al = enumerate_aligned(sp, q);
  CHECK(al.size() == 4);
  for (const auto& c : al) CHECK(gradient(c, q, PotentialSpec::coulomb()).norm() < 1e-11);
  CHECK(enumerate_aligned(PolygonSpace{3}, q).size() == 3);
  // Coincident radii: the (0,0,0) family member with p1 = p2 is a pole.
  CHECK(enumerate_aligned(TorusSpace{{1, 1, 2}}, q).size() < 4);
}

TEST_CASE("polygon n=3 with equal charges: two triangles and three segments") {
  const ChargeVector q({1.0, 1.0, 1.0});
  const SolveResult r = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb());
  REQUIRE(r.points.size() == 5);
  CHECK(count_minima(r) == 2);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    CHECK(p.grad_norm < 1e-11);
    CHECK(p.stationarity_residual < 1e-9);
    if (p.aligned) {
      CHECK(p.morse_index == 1);
      CHECK_FALSE(p.symmetry_partner.has_value());
    } else {
      CHECK(p.morse_index == 0);
      REQUIRE(p.symmetry_partner.has_value());
      const auto& partner = r.points[*p.symmetry_partner];
      CHECK(config_distance(apply_involution(p.config), partner.config) < 1e-8);
    }
    // Independent check with the finite-difference gradient.
    const auto& poly = std::get<PolygonConfig>(p.config);
    CHECK(fd_gradient(poly, q, PotentialSpec::coulomb(), default_fd_step(p.config)).norm() < 1e-7);
  }
  CHECK(r.points.front().energy <= r.points.back().energy);
}

TEST_CASE("polygon n=3 below the threshold: one aligned minimum") {
  const ChargeVector q({0.125, 1.0, 1.0});
  const SolveResult r = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb());
  REQUIRE(r.points.size() == 3);
  CHECK(count_minima(r) == 1);
  for (const auto& p : r.points) {
    CHECK(p.aligned);
    if (p.morse_index == 0) {
      const auto d = pairwise_distances(p.config);
      CHECK(d(1, 2) == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("torus r=(1,2,3)") {
  const Space sp = TorusSpace{{1, 2, 3}};
  SUBCASE("large q3: the four aligned points only, one of them a minimum") {
    const ChargeVector q({1.0, 1.0, 100.0});
    const SolveResult r = find_critical_points(sp, q, PotentialSpec::coulomb());
    CHECK(r.points.size() == 4);
    bool aligned_min = false;
    for (const auto& p : r.points) {
      CHECK(p.aligned);
      aligned_min = aligned_min || p.morse_index == 0;
    }
    CHECK(aligned_min);
  }
  SUBCASE("q=(1,1,10): six points and no aligned minimum") {
    const ChargeVector q({1.0, 1.0, 10.0});
    const SolveResult r = find_critical_points(sp, q, PotentialSpec::coulomb());
    CHECK(r.points.size() == 6);
    for (const auto& p : r.points) {
      if (p.aligned) CHECK(p.morse_index != 0);
      CHECK(fd_gradient(std::get<TorusConfig>(p.config), q, PotentialSpec::coulomb(), default_fd_step(p.config))
                .norm() < 1e-6 * 100.0);
    }
    CHECK(count_minima(r) == 2);
  }
}

TEST_CASE("torus with equal radii and equal charges") {
  const ChargeVector q({1.0, 1.0, 1.0});
  const SolveResult r = find_critical_points(TorusSpace{{1, 1, 1}}, q, PotentialSpec::coulomb());
  std::size_t minima = 0;
  for (const auto& p : r.points) {
    if (p.morse_index == 0 && !p.degenerate) {
      ++minima;
      const auto d = std::get<TorusConfig>(p.config).distances();
      CHECK(d[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    }
  }
  CHECK(minima == 2);
}

TEST_CASE("results do not depend on the thread count") {
  const ChargeVector q({1.0, 0.7, 1.3, 0.9});
  SolveSettings one;
  one.threads = 1;
  one.grid_density = 8;
  SolveSettings four = one;
  four.threads = 4;
  const SolveResult a = find_critical_points(PolygonSpace{4}, q, PotentialSpec::coulomb(), one);
  const SolveResult b = find_critical_points(PolygonSpace{4}, q, PotentialSpec::coulomb(), four);
  REQUIRE(a.points.size() == b.points.size());
  CHECK(a.points.size() > 0);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].energy == b.points[i].energy);
    CHECK(a.points[i].key == b.points[i].key);
    CHECK(config_distance(a.points[i].config, b.points[i].config) == 0.0);
  }
}

TEST_CASE("scaling the charges keeps the critical set") {
  const ChargeVector q({1.0, 2.0, 3.0});
  const SolveResult base = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb());
  for (double c : {0.1, 10.0}) {
    const SolveResult s = find_critical_points(PolygonSpace{3}, q.scaled(c), PotentialSpec::coulomb());
    REQUIRE(s.points.size() == base.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      CHECK(s.points[i].energy == doctest::Approx(c * c * base.points[i].energy).epsilon(1e-9));
      CHECK(s.points[i].morse_index == base.points[i].morse_index);
    }
  }
}

TEST_CASE("charge count must match the space") {
  CHECK_THROWS(find_critical_points(PolygonSpace{3}, ChargeVector({1.0, 1.0}), PotentialSpec::coulomb()));
  CHECK_THROWS(find_critical_points(TorusSpace{{1, 2, 3}}, ChargeVector({1.0, 1.0, 1.0, 1.0}), PotentialSpec::coulomb()));
}
