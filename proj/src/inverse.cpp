#include "coulomb_eq/inverse.hpp"

#include <cmath>
#include <stdexcept>

namespace ceq {

std::string to_string(InverseKind kind) {
  switch (kind) {
    case InverseKind::unique_ray:
      return "unique-ray";
    case InverseKind::one_parameter_family:
      return "one-parameter-family";
    case InverseKind::infeasible:
      return "infeasible";
  }
  return "infeasible";
}

namespace {

// Aligned triangle with vertex k between outer vertices a and b, at distances
// da from a and db from b, da + db = 1/2.
InverseResult aligned_family(int k, int a, int b, double da, double db) {
  std::vector<Point> pts(3);
  pts[static_cast<std::size_t>(a)] = Point(0.0, 0.0);
  pts[static_cast<std::size_t>(k)] = Point(da, 0.0);
  pts[static_cast<std::size_t>(b)] = Point(da + db, 0.0);

  // q_a / q_b = (da / db)^2; the intermediate bound is 1 / (1/sqrt q_a + 1/sqrt q_b)^2.
  const double qa = da * da;
  const double qb = db * db;
  const double inv = 1.0 / da + 1.0 / db;
  const double bound = 1.0 / (inv * inv);
  const double mid = 0.5 * bound;
  const double total = qa + qb + mid;

  std::vector<double> q(3);
  q[static_cast<std::size_t>(a)] = qa / total;
  q[static_cast<std::size_t>(b)] = qb / total;
  q[static_cast<std::size_t>(k)] = mid / total;

  InverseResult r;
  r.kind = InverseKind::one_parameter_family;
  r.charges = ChargeVector(q);
  r.family = AlignedFamily{k, {a, b}, {qa / total, qb / total}, bound / total};
  r.config = PolygonConfig::from_points(pts);
  r.note = "critical for every intermediate charge; minimum only up to the bound";
  return r;
}

}  // namespace

InverseResult stabilizing_charges_triangle(double l1, double l2, double l3) {
  const std::array<double, 3> l{l1, l2, l3};
  for (double v : l) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("side lengths must be positive and finite");
  }
  const double per = l1 + l2 + l3;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const double excess = l[i] - l[j] - l[k];
    if (std::abs(excess) <= 1e-12 * per) {
      // Side i is opposite vertex i, so vertex i is intermediate. Its distance
      // to vertex j is l_k and to vertex k is l_j.
      return aligned_family(i, j, k, 0.5 * l[k] / (l[j] + l[k]), 0.5 * l[j] / (l[j] + l[k]));
    }
    if (excess > 0.0) {
      InverseResult r;
      r.note = "side lengths violate the triangle inequality";
      return r;
    }
  }
  const std::vector<double> raw{1.0 / (l1 * l1), 1.0 / (l2 * l2), 1.0 / (l3 * l3)};
  InverseResult r;
  r.kind = InverseKind::unique_ray;
  r.charges = ChargeVector(ChargeVector(raw).normalized());
  const double x = (l2 * l2 + l3 * l3 - l1 * l1) / (2.0 * l3);
  const std::vector<Point> pts{Point(0.0, 0.0), Point(l3, 0.0), Point(x, std::sqrt(std::max(0.0, l2 * l2 - x * x)))};
  r.config = PolygonConfig::from_points(pts);
  return r;
}

InverseResult stabilizing_charges_aligned(double d_left, double d_right) {
  if (!(d_left > 0.0) || !(d_right > 0.0)) throw std::domain_error("aligned distances must be positive");
  if (std::abs(d_left + d_right - 0.5) > 1e-12) {
    throw std::domain_error("aligned distances of a perimeter-1 triangle must sum to 1/2");
  }
  return aligned_family(1, 0, 2, d_left, d_right);
}

InverseResult stabilizing_charges_torus(const TorusConfig& config, const PotentialSpec& spec) {
  InverseResult r;
  r.config = config;
  if (config.has_pole(kPoleRadius)) throw PoleError("configuration sits at a pole");
  const auto a = config.angles();
  const auto d = config.distances();
  const auto& rad = config.radii();
  const std::array<double, 3> s{std::sin(a[0]), std::sin(a[1]), std::sin(a[2])};
  const bool aligned = std::abs(s[0]) <= 1e-12 && std::abs(s[1]) <= 1e-12 && std::abs(s[2]) <= 1e-12;
  if (aligned) {
    r.kind = InverseKind::one_parameter_family;
    r.positive_octant = true;
    r.charges = ChargeVector({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.note = "aligned configurations are critical for every charge vector";
    return r;
  }
  const std::array<double, 3> rr{rad[1] * rad[2], rad[2] * rad[0], rad[0] * rad[1]};
  std::vector<double> w(3);
  for (std::size_t i = 0; i < 3; ++i) w[i] = kernel_eval(spec, d[i]).first * rr[i] * s[i] / d[i];
  const bool all_pos = w[0] > 0.0 && w[1] > 0.0 && w[2] > 0.0;
  const bool all_neg = w[0] < 0.0 && w[1] < 0.0 && w[2] < 0.0;
  if (!all_pos && !all_neg) {
    r.note = "stationarity would require charges of mixed sign or a zero charge";
    return r;
  }
  r.kind = InverseKind::unique_ray;
  if (all_neg) {
    for (double& v : w) v = -v;
  }
  r.charges = ChargeVector(ChargeVector(w).normalized());
  return r;
}

EquilibriumReport verify_equilibrium(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  const CriticalPoint cp = describe_point(config, q, spec);
  const double s = q.max_abs();
  EquilibriumReport rep;
  rep.grad_norm = cp.grad_norm / std::max(1.0, s * s);
  rep.stationarity_residual = cp.stationarity_residual;
  rep.passed = rep.grad_norm < 1e-9 && rep.stationarity_residual < 1e-9;
  return rep;
}

}  // namespace ceq
