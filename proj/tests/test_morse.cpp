#include "coulomb_eq/morse.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace ceq;

namespace {

CriticalPoint fake_point(int index, bool degenerate = false) {
  CriticalPoint cp{TorusConfig({1, 2, 3}, 0.0, 0.0), 0.0, 0.0, 0.0, {}, index, degenerate, false, {}, std::nullopt};
  return cp;
}

}  // namespace

TEST_CASE("morse index") {
  CHECK(morse_index(fake_point(1)) == 1);
  CHECK_THROWS_AS(morse_index(fake_point(0, true)), MorseError);

  const ChargeVector q({1.0, 1.0, 1.0});
  const auto tri = critical_triangle(q);
  REQUIRE(tri.has_value());
  CHECK(morse_index(describe_point(*tri, q, PotentialSpec::coulomb())) == 0);
  for (const auto& s : solve_line_three(q)) {
    CHECK(morse_index(describe_point(s, q, PotentialSpec::coulomb())) == 1);
  }
}

TEST_CASE("aligned torus labels") {
  CHECK(label_name(AlignedLabel::pi_pi_0) == "(pi,pi,0)");
  for (auto l : kAlignedLabels) {
    const auto a = label_angles(l);
    CHECK(std::abs(reduce_angle(a[0] + a[1] + a[2])) < 1e-15);
    const TorusConfig t = aligned_config({1, 2, 3}, l);
    CHECK(alignment_defect(t) == 0.0);
  }
}

TEST_CASE("determinant sign form at (pi,pi,0) for r=(1,2,3)") {
  const LinearForm f = torus_aligned_hessian_form({1, 2, 3}, AlignedLabel::pi_pi_0);
  CHECK(f.coeffs[0] == doctest::Approx(-1.0 / 64.0).epsilon(1e-14));
  CHECK(f.coeffs[1] == doctest::Approx(-2.0 / 125.0).epsilon(1e-14));
  CHECK(f.coeffs[2] == doctest::Approx(3.0 / 8000.0).epsilon(1e-14));
  CHECK(f.signs() == std::array<int, 3>{-1, -1, 1});
  const std::array<double, 3> ones{1.0, 1.0, 1.0};
  CHECK(f(ones) == doctest::Approx(-0.03125).epsilon(1e-12));
  CHECK(torus_aligned_hessian_form({1, 2, 3}, AlignedLabel::zero_zero_zero).signs() == std::array<int, 3>{1, 1, 1});
  CHECK(torus_aligned_hessian_form({1, 2, 3}, AlignedLabel::zero_pi_pi).signs() == std::array<int, 3>{1, -1, -1});
  CHECK(torus_aligned_hessian_form({1, 2, 3}, AlignedLabel::pi_zero_pi).signs() == std::array<int, 3>{-1, 1, -1});
  CHECK_THROWS_AS(torus_aligned_hessian_form({1, 1, 3}, AlignedLabel::pi_pi_0), MorseError);
}

TEST_CASE("the form is a positive multiple of the finite-difference Hessian determinant") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agreements = 0;
  int trials = 0;
  while (trials < 100) {
    const std::array<double, 3> r{0.5 + u(rng), 1.6 + u(rng), 2.7 + u(rng)};
    const std::array<double, 3> q{std::exp(4 * u(rng) - 2), std::exp(4 * u(rng) - 2), std::exp(4 * u(rng) - 2)};
    const ChargeVector cq({q[0], q[1], q[2]});
    const AlignedLabel l = kAlignedLabels[static_cast<std::size_t>(trials % 4)];
    const TorusConfig t = aligned_config(r, l);
    const LinearForm form = torus_aligned_hessian_form(r, l);
    const double h = form(q);
    const Eigen::MatrixXd fd = fd_hessian(t, cq, PotentialSpec::coulomb(), default_fd_step(t));
    const double det = fd.determinant();
    const double predicted = q[0] * q[1] * q[2] * r[0] * r[1] * r[2] * h;
    ++trials;
    // The determinant of a 2x2 matrix loses accuracy in proportion to |H|^2.
    CHECK(std::abs(det - predicted) <= 1e-5 * fd.squaredNorm());
    if ((det > 0) == (h > 0)) ++agreements;
  }
  CHECK(agreements == 100);
}

TEST_CASE("Euler count on triangles") {
  const ChargeVector q({1.0, 1.0, 1.0});
  const SolveResult r = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb());
  const MorseSummary s = euler_count_check(r.points, PolygonSpace{3});
  CHECK(s.minima == 2);
  CHECK(s.saddles == 3);
  CHECK(s.poles_count == 3);
  CHECK(s.euler_sum == 2);
  CHECK(s.euler == EulerStatus::passed);
  CHECK(to_string(s.euler) == "pass");

  // Dropping a saddle breaks the count.
  std::vector<CriticalPoint> fewer(r.points.begin(), r.points.end() - 1);
  std::size_t saddles_left = 0;
  for (const auto& p : fewer) saddles_left += p.morse_index == 1 ? 1 : 0;
  if (saddles_left == 2) CHECK(euler_count_check(fewer, PolygonSpace{3}).euler == EulerStatus::failed);
}

TEST_CASE("Euler count on the torus") {
  const std::vector<CriticalPoint> four{fake_point(0), fake_point(1), fake_point(1), fake_point(2)};
  const MorseSummary s = euler_count_check(four, TorusSpace{{1, 2, 3}});
  CHECK(s.euler == EulerStatus::passed);
  CHECK(s.exactness);
  CHECK(s.maxima == 1);

  const std::vector<CriticalPoint> six{fake_point(0), fake_point(0), fake_point(1),
                                       fake_point(1), fake_point(1), fake_point(2)};
  const MorseSummary s6 = euler_count_check(six, TorusSpace{{1, 2, 3}});
  CHECK(s6.euler == EulerStatus::passed);
  CHECK_FALSE(s6.exactness);
  const std::vector<CriticalPoint> odd{fake_point(0), fake_point(0), fake_point(1), fake_point(2)};
  CHECK(euler_count_check(odd, TorusSpace{{1, 2, 3}}).euler == EulerStatus::failed);

  const std::vector<CriticalPoint> degenerate{fake_point(0), fake_point(1, true)};
  const MorseSummary sd = euler_count_check(degenerate, TorusSpace{{1, 2, 3}});
  CHECK(sd.euler == EulerStatus::not_applicable);
  CHECK(sd.degenerate == 1);

  CHECK(euler_count_check(four, TorusSpace{{1, 1, 3}}).euler == EulerStatus::not_applicable);
  CHECK(euler_count_check(four, PolygonSpace{4}).euler == EulerStatus::not_applicable);

  const ChargeVector q({1.0, 1.0, 10.0});
  const SolveResult r = find_critical_points(TorusSpace{{1, 2, 3}}, q, PotentialSpec::coulomb());
  const MorseSummary real = euler_count_check(r.points, TorusSpace{{1, 2, 3}});
  CHECK(real.euler == EulerStatus::passed);
  CHECK(real.minima == 2);
  CHECK(real.maxima == 1);
  CHECK(real.saddles == 3);
}

TEST_CASE("aligned block spectra") {
  const ChargeVector q({4.0, 1.0, 1.0});
  const auto segs = solve_line_three(q);
  const AlignedBlocks b = aligned_block_spectra(segs[1], q, PotentialSpec::coulomb());
  CHECK(b.longitudinal.size() == 1);
  CHECK(b.transverse.size() == 1);
  CHECK(b.longitudinal(0) > 0.0);
  CHECK(b.transverse(0) < 0.0);
  Eigen::VectorXd merged(2);
  merged << std::min(b.longitudinal(0), b.transverse(0)), std::max(b.longitudinal(0), b.transverse(0));
  CHECK((merged - b.full).norm() < 1e-9 * b.full.norm());

  const auto tri = critical_triangle(ChargeVector({1.0, 1.0, 1.0}));
  CHECK_THROWS(aligned_block_spectra(*tri, ChargeVector({1.0, 1.0, 1.0}), PotentialSpec::coulomb()));
}
