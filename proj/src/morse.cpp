#include "coulomb_eq/morse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace ceq {

int morse_index(const CriticalPoint& cp) {
  if (cp.degenerate) throw MorseError("degenerate critical point has no Morse index");
  return cp.morse_index;
}

std::array<double, 3> label_angles(AlignedLabel label) {
  switch (label) {
    case AlignedLabel::pi_pi_0:
      return {kPi, kPi, 0.0};
    case AlignedLabel::zero_pi_pi:
      return {0.0, kPi, kPi};
    case AlignedLabel::pi_zero_pi:
      return {kPi, 0.0, kPi};
    case AlignedLabel::zero_zero_zero:
      return {0.0, 0.0, 0.0};
  }
  throw std::logic_error("unknown label");
}

std::string label_name(AlignedLabel label) {
  switch (label) {
    case AlignedLabel::pi_pi_0:
      return "(pi,pi,0)";
    case AlignedLabel::zero_pi_pi:
      return "(0,pi,pi)";
    case AlignedLabel::pi_zero_pi:
      return "(pi,0,pi)";
    case AlignedLabel::zero_zero_zero:
      return "(0,0,0)";
  }
  throw std::logic_error("unknown label");
}

TorusConfig aligned_config(const std::array<double, 3>& radii, AlignedLabel label) {
  const auto a = label_angles(label);
  return TorusConfig(radii, a[0], a[1]);
}

std::array<int, 3> LinearForm::signs() const {
  std::array<int, 3> s{};
  for (int i = 0; i < 3; ++i) s[i] = (coeffs[i] > 0.0) - (coeffs[i] < 0.0);
  return s;
}

LinearForm torus_aligned_hessian_form(const std::array<double, 3>& radii, AlignedLabel label) {
  const auto& r = radii;
  if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) {
    throw MorseError("aligned Hessian form needs pairwise distinct radii");
  }
  const auto a = label_angles(label);
  const std::array<double, 3> c{std::cos(a[0]), std::cos(a[1]), std::cos(a[2])};
  const double d1 = chord_distance(r[1], r[2], a[0]);
  const double d2 = chord_distance(r[2], r[0], a[1]);
  const double d3 = chord_distance(r[0], r[1], a[2]);
  const double d1c = d1 * d1 * d1;
  const double d2c = d2 * d2 * d2;
  const double d3c = d3 * d3 * d3;
  LinearForm f;
  f.coeffs = {r[0] / (d2c * d3c) * c[1] * c[2], r[1] / (d3c * d1c) * c[2] * c[0], r[2] / (d1c * d2c) * c[0] * c[1]};
  return f;
}

std::string to_string(EulerStatus status) {
  switch (status) {
    case EulerStatus::passed:
      return "pass";
    case EulerStatus::failed:
      return "fail";
    case EulerStatus::not_applicable:
      return "not-applicable";
  }
  return "not-applicable";
}

MorseSummary euler_count_check(std::span<const CriticalPoint> points, const Space& space) {
  MorseSummary s;
  const bool torus = std::holds_alternative<TorusSpace>(space);
  const int top_index = torus ? 2 : 2 * (std::get<PolygonSpace>(space).n - 2);
  for (const auto& cp : points) {
    if (cp.degenerate) {
      ++s.degenerate;
      continue;
    }
    ++s.counts[cp.morse_index];
    if (cp.morse_index == 0) {
      ++s.minima;
    } else if (cp.morse_index == top_index) {
      ++s.maxima;
    } else {
      ++s.saddles;
    }
    s.euler_sum += (cp.morse_index % 2 == 0) ? 1 : -1;
  }

  if (!torus && std::get<PolygonSpace>(space).n != 3) {
    s.reason = "Euler count is only checked for triangles and the torus";
    return s;
  }
  if (!torus) {
    s.poles_count = 3;
    s.euler_sum += 3;
    s.euler_expected = 2;
  } else {
    const auto& r = std::get<TorusSpace>(space).radii;
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) {
      s.reason = "coincident radii: the energy is singular along whole circles";
      return s;
    }
    s.euler_expected = 0;
    s.exactness = s.degenerate == 0 && points.size() == 4;
  }
  if (s.degenerate > 0) {
    s.reason = "degenerate critical points present; count skipped";
    return s;
  }
  s.euler = s.euler_sum == s.euler_expected ? EulerStatus::passed : EulerStatus::failed;
  return s;
}

namespace {

// Orthonormal basis of the complement of v in R^dim.
Eigen::MatrixXd complement_of(const Eigen::VectorXd& v) {
  const Eigen::MatrixXd column = v;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(column);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(v.size() - 1);
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

}  // namespace

AlignedBlocks aligned_block_spectra(const PolygonConfig& aligned, const ChargeVector& q, const PotentialSpec& spec) {
  if (alignment_defect(aligned) != 0.0) throw std::invalid_argument("configuration is not aligned");
  const auto& pts = aligned.points();
  const PolygonDerivatives der = polygon_derivatives(pts, q, spec);
  const ConstrainedSystem cs = constrained_system(der, pts);
  const Eigen::MatrixXd lagrangian = der.hessian - cs.multiplier * der.perimeter_hessian;

  const Eigen::Index k = static_cast<Eigen::Index>(pts.size() - 1);
  Eigen::MatrixXd lxx(k, k);
  Eigen::MatrixXd lyy(k, k);
  Eigen::VectorXd gx(k);
  Eigen::VectorXd rot_y(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    gx(i) = der.perimeter_gradient(2 * i);
    rot_y(i) = pts[static_cast<std::size_t>(i) + 1].x();
    for (Eigen::Index j = 0; j < k; ++j) {
      lxx(i, j) = lagrangian(2 * i, 2 * j);
      lyy(i, j) = lagrangian(2 * i + 1, 2 * j + 1);
    }
  }
  const Eigen::MatrixXd zx = complement_of(gx);
  const Eigen::MatrixXd zy = complement_of(rot_y);
  AlignedBlocks out;
  out.longitudinal = sorted_eigenvalues(zx.transpose() * lxx * zx);
  out.transverse = sorted_eigenvalues(zy.transpose() * lyy * zy);
  out.full = sorted_eigenvalues(cs.reduced_hessian);
  return out;
}

}  // namespace ceq
