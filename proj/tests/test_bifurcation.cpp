#include "coulomb_eq/bifurcation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ceq;

TEST_CASE("polygon bifurcation curves satisfy their defining equality") {
  const auto curves = polygon_bifurcation_set(200);
  REQUIRE(curves.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(curves[static_cast<std::size_t>(i)].samples.size() == 200);
    for (const auto& p : curves[static_cast<std::size_t>(i)].samples) {
      CHECK(std::abs(p.q[0] + p.q[1] + p.q[2] - 1.0) < 1e-14);
      CHECK(std::min({p.q[0], p.q[1], p.q[2]}) > 0.0);
      CHECK(std::abs(polygon_curve_residual(p, i)) < 1e-10 * (1.0 / std::sqrt(p.q[static_cast<std::size_t>(i)])));
    }
  }
  CHECK_THROWS(polygon_bifurcation_set(4));
}

TEST_CASE("polygon regions") {
  const std::array<double, 3> boundary{1.0 / 9, 4.0 / 9, 4.0 / 9};
  CHECK(classify_polygon_region(boundary, 1e-9).region == PolygonRegion::boundary);
  const std::array<double, 3> centre{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(classify_polygon_region(centre).region == PolygonRegion::two_minima);
  const std::array<double, 3> small{0.05, 0.5, 0.45};
  const RegionInfo info = classify_polygon_region(small);
  CHECK(info.region == PolygonRegion::aligned_minimum);
  CHECK(info.intermediate == 0);
  // Unnormalized input lands in the same region.
  const std::array<double, 3> scaled{0.5, 5.0, 4.5};
  CHECK(classify_polygon_region(scaled).intermediate == 0);
}

TEST_CASE("region classification agrees with a direct solve") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  SolveSettings s;
  s.grid_density = 12;
  for (int trial = 0; trial < 8; ++trial) {
    const std::array<double, 3> q{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    const RegionInfo info = classify_polygon_region(q, 1e-3);
    if (info.region == PolygonRegion::boundary) continue;
    const SolveResult r = find_critical_points(PolygonSpace{3}, ChargeVector({q[0], q[1], q[2]}), PotentialSpec::coulomb(), s);
    std::size_t minima = 0;
    for (const auto& p : r.points) minima += p.morse_index == 0 ? 1 : 0;
    CHECK(minima == (info.region == PolygonRegion::two_minima ? 2u : 1u));
  }
}

TEST_CASE("torus bifurcation set") {
  const std::array<double, 3> r{1, 2, 3};
  const auto curves = torus_bifurcation_set(r, 100);
  REQUIRE(curves.size() == 3);
  for (std::size_t a = 0; a < curves.size(); ++a) {
    const auto& c = curves[a];
    CHECK(c.samples.size() == 100);
    AlignedLabel label{};
    for (auto l : kAlignedLabels) {
      if (label_name(l) == c.label) label = l;
    }
    const LinearForm f = torus_aligned_hessian_form(r, label);
    double scale = 0.0;
    for (double x : f.coeffs) scale = std::max(scale, std::abs(x));
    for (const auto& p : c.samples) CHECK(std::abs(f(p.q)) < 1e-12 * scale);
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      CHECK_FALSE(segments_intersect(c.samples.front(), c.samples.back(), curves[b].samples.front(),
                                     curves[b].samples.back()));
    }
  }
  CHECK_THROWS_AS(torus_bifurcation_set({1, 1, 2}, 100), MorseError);
}

TEST_CASE("segment intersection") {
  const ControlPoint a0{{1, 0, 0}}, a1{{0, 1, 0}}, b0{{0.5, 0.5, 0}}, b1{{0, 0, 1}}, c0{{0.6, 0, 0.4}}, c1{{0, 0.6, 0.4}};
  CHECK(segments_intersect(a0, a1, b0, b1));
  CHECK_FALSE(segments_intersect(a0, a1, c0, c1));
}

TEST_CASE("charge paths") {
  const auto [path, lo, hi] = ChargePath::parse("q2:0.05:0.6", {1.0, 1.0, 1.0});
  CHECK(path.index == 1);
  CHECK(lo == 0.05);
  CHECK(hi == 0.6);
  CHECK(path.at(0.3)[1] == 0.3);
  CHECK(path.at(0.3)[0] == 1.0);
  CHECK_THROWS(ChargePath::parse("q4:0.1:1", {1.0, 1.0, 1.0}));
  CHECK_THROWS(ChargePath::parse("q2:0.1", {1.0, 1.0, 1.0}));
  CHECK_THROWS(ChargePath::parse("x2:0.1:1", {1.0, 1.0, 1.0}));
  CHECK_THROWS(ChargePath::parse("q2:a:1", {1.0, 1.0, 1.0}));
}

TEST_CASE("polygon thresholds match the closed form") {
  SUBCASE("equal outer charges") {
    const auto [path, lo, hi] = ChargePath::parse("q2:0.05:0.6", {1.0, 1.0, 1.0});
    const ThresholdResult t = detect_threshold(PolygonSpace{3}, path, lo, hi);
    CHECK(std::abs(t.lambda_c - 0.25) <= 1e-4);
    CHECK(t.tracked.polygon_intermediate == 1);
    CHECK(std::abs(t.eigenvalue) < 1e-9);
  }
  SUBCASE("outer charges 4 and 1") {
    const auto [path, lo, hi] = ChargePath::parse("q2:0.1:1", {4.0, 1.0, 1.0});
    const ThresholdResult t = detect_threshold(PolygonSpace{3}, path, lo, hi);
    CHECK(std::abs(t.lambda_c - 4.0 / 9.0) <= 1e-4);
  }
  SUBCASE("no crossing in range") {
    const auto [path, lo, hi] = ChargePath::parse("q2:0.5:0.9", {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(detect_threshold(PolygonSpace{3}, path, lo, hi), BifurcationError);
  }
}

TEST_CASE("torus threshold matches the zero of the determinant form") {
  const std::array<double, 3> r{1, 2, 3};
  const auto [path, lo, hi] = ChargePath::parse("q3:40:150", {1.0, 1.0, 1.0});
  const ThresholdResult t = detect_threshold(TorusSpace{r}, path, lo, hi);
  REQUIRE(t.tracked.torus_label.has_value());
  const LinearForm f = torus_aligned_hessian_form(r, *t.tracked.torus_label);
  const double zero = -(f.coeffs[0] + f.coeffs[1]) / f.coeffs[2];
  CHECK(t.lambda_c == doctest::Approx(zero).epsilon(1e-6));
  CHECK(*t.tracked.torus_label == AlignedLabel::pi_pi_0);
}

TEST_CASE("pitchfork branches") {
  const auto [path, lo, hi] = ChargePath::parse("q2:0.2:0.3", {1.0, 1.0, 1.0});
  const BranchDiagram d = trace_pitchfork(PolygonSpace{3}, path, lo, hi, 51);
  CHECK(std::abs(d.threshold.lambda_c - 0.25) < 1e-4);
  std::size_t off = 0;
  for (const auto& s : d.samples) {
    if (s.branch == 0) {
      CHECK(s.amplitude == 0.0);
      if (s.lambda < d.threshold.lambda_c - 1e-6) CHECK(s.stability == "min");
      if (s.lambda > d.threshold.lambda_c + 1e-6) CHECK(s.stability == "saddle");
    } else {
      ++off;
      CHECK(s.lambda > d.threshold.lambda_c);
      CHECK(s.stability == "min");
    }
  }
  CHECK(off > 0);
  CHECK(off % 2 == 0);
  const ExponentFit fit = fit_branch_exponent(d, 0.05);
  CHECK(fit.samples >= 3);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("transverse amplitude vanishes on aligned configurations") {
  const TrackedAligned tracked{1, std::nullopt};
  const ChargeVector q({1.0, 0.2, 1.0});
  const Configuration c = tracked_config(PolygonSpace{3}, tracked, q);
  CHECK(transverse_amplitude(c, tracked) == 0.0);
  CHECK(transverse_eigenvalue(PolygonSpace{3}, tracked, q, PotentialSpec::coulomb()) > 0.0);
  CHECK(transverse_eigenvalue(PolygonSpace{3}, tracked, ChargeVector({1.0, 0.5, 1.0}), PotentialSpec::coulomb()) < 0.0);
}

TEST_CASE("fixing effect") {
  const std::vector<double> q2{0.01, 0.1, 0.2, 0.3};
  const FixingProbe p = fixing_effect_probe(1.0, 1.0, q2);
  CHECK(p.threshold == doctest::Approx(0.25));
  REQUIRE(p.entries.size() == 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p.entries[i].included);
    CHECK(p.entries[i].d12 == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(p.entries[i].ratio == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK_FALSE(p.entries[3].included);
  CHECK(p.entries[3].minimum_alignment_defect > 0.0);

  const FixingProbe p4 = fixing_effect_probe(4.0, 1.0, std::vector<double>{0.1});
  CHECK(p4.expected_ratio == doctest::Approx(2.0));
  CHECK(p4.entries[0].d12 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}
