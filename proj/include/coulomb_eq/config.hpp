#pragma once

// Configuration spaces: fixed-perimeter planar polygons and triples of points
// on three concentric circles.

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ceq {

using Point = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Relative distance below which two charged points count as coincident.
inline constexpr double kPoleRadius = 1e-7;
inline constexpr double kPerimeterTol = 1e-12;
/// Alignment threshold, relative to the configuration diameter.
inline constexpr double kAlignmentTol = 1e-10;
/// Resolution of the distance rounding used in symmetry keys.
inline constexpr double kKeyResolution = 1e-9;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonzero charges. All shipped analyses assume positive entries; mixed signs
/// are accepted and reported through all_positive().
class ChargeVector {
 public:
  explicit ChargeVector(std::vector<double> q);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const { return q_; }

  bool all_positive() const;
  double max_abs() const;
  double sum() const;

  /// q / sum(q); the control-space coordinate. Throws if sum(q) <= 0.
  std::vector<double> normalized() const;

  ChargeVector scaled(double c) const;

 private:
  std::vector<double> q_;
};

/// Reduces an angle to (-pi, pi].
double reduce_angle(double a);

/// Gauge-fixed polygon of perimeter 1: p1 at the origin, the first vertex
/// distinct from p1 on the non-negative x half-axis.
class PolygonConfig {
 public:
  /// Translates, rotates and rescales arbitrary points into the gauge.
  /// Throws ConfigError for fewer than 3 points or zero perimeter.
  static PolygonConfig from_points(std::span<const Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  double perimeter() const;
  double diameter() const;
  double min_pair_distance() const;
  /// True when two vertices are closer than radius * perimeter.
  bool has_pole(double radius = kPoleRadius) const;

 private:
  explicit PolygonConfig(std::vector<Point> points) : points_(std::move(points)) {}
  std::vector<Point> points_;
};

/// Point of T(r1, r2, r3) in the central-angle chart (alpha1, alpha2).
/// alpha1 = angle(p2, p3), alpha2 = angle(p3, p1), alpha3 = angle(p1, p2) =
/// 2*pi - alpha1 - alpha2; all stored reduced to (-pi, pi].
class TorusConfig {
 public:
  TorusConfig(std::array<double, 3> radii, double alpha1, double alpha2);

  const std::array<double, 3>& radii() const { return radii_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  double alpha3() const { return reduce_angle(-alpha1_ - alpha2_); }
  std::array<double, 3> angles() const { return {alpha1_, alpha2_, alpha3()}; }

  /// (d1, d2, d3) = (|p2p3|, |p3p1|, |p1p2|) from the cosine rule.
  std::array<double, 3> distances() const;
  /// Planar points with p1 on the positive x axis.
  std::vector<Point> points() const;
  double min_radius() const;
  bool has_pole(double radius = kPoleRadius) const;

 private:
  std::array<double, 3> radii_;
  double alpha1_;
  double alpha2_;
};

using Configuration = std::variant<PolygonConfig, TorusConfig>;

/// Distance between two circle points at central angle `angle`; the cosine
/// rule written in the cancellation-free form (ra - rb)^2 + 4 ra rb sin^2(a/2).
double chord_distance(double ra, double rb, double angle);

Eigen::MatrixXd pairwise_distances(std::span<const Point> points);
Eigen::MatrixXd pairwise_distances(const PolygonConfig& config);
Eigen::MatrixXd pairwise_distances(const TorusConfig& config);
Eigen::MatrixXd pairwise_distances(const Configuration& config);

PolygonConfig apply_involution(const PolygonConfig& config);
TorusConfig apply_involution(const TorusConfig& config);
Configuration apply_involution(const Configuration& config);

/// Max distance of a point to the best-fit (principal axis) line, or 0 when
/// that is below kAlignmentTol * diameter.
double alignment_defect(std::span<const Point> points);
double alignment_defect(const PolygonConfig& config);
double alignment_defect(const TorusConfig& config);
double alignment_defect(const Configuration& config);

/// Label-ordered pairwise distances (d12, d13, ..., d(n-1)n) rounded to
/// kKeyResolution. Invariant under rotation and reflection.
struct SymmetryKey {
  std::vector<std::int64_t> rounded;
  auto operator<=>(const SymmetryKey&) const = default;
  std::string to_string() const;
};

struct Canonical {
  Configuration config;
  SymmetryKey key;
};

SymmetryKey symmetry_key(const Configuration& config);
Canonical canonicalize(const Configuration& config);

/// Chart distance between two configurations of the same space: max
/// coordinate difference for polygons, max wrapped angle difference on the torus.
double config_distance(const Configuration& a, const Configuration& b);

std::vector<Point> config_points(const Configuration& config);
double config_diameter(const Configuration& config);
bool is_polygon(const Configuration& config);

}  // namespace ceq
