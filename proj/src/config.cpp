#include "coulomb_eq/config.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ceq {

ChargeVector::ChargeVector(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) throw ConfigError("charge vector is empty");
  for (double v : q_) {
    if (!std::isfinite(v) || v == 0.0) throw ConfigError("charges must be finite and nonzero");
  }
}

bool ChargeVector::all_positive() const {
  return std::all_of(q_.begin(), q_.end(), [](double v) { return v > 0.0; });
}

double ChargeVector::max_abs() const {
  double m = 0.0;
  for (double v : q_) m = std::max(m, std::abs(v));
  return m;
}

double ChargeVector::sum() const { return std::accumulate(q_.begin(), q_.end(), 0.0); }

std::vector<double> ChargeVector::normalized() const {
  const double s = sum();
  if (!(s > 0.0)) throw ConfigError("charges with nonpositive sum have no normalized view");
  std::vector<double> out(q_);
  for (double& v : out) v /= s;
  return out;
}

ChargeVector ChargeVector::scaled(double c) const {
  std::vector<double> out(q_);
  for (double& v : out) v *= c;
  return ChargeVector(std::move(out));
}

double reduce_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// ---------------------------------------------------------------------------
// PolygonConfig

namespace {

double cyclic_perimeter(std::span<const Point> pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (pts[(i + 1) % pts.size()] - pts[i]).norm();
  return s;
}

double points_diameter(std::span<const Point> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace

PolygonConfig PolygonConfig::from_points(std::span<const Point> points) {
  if (points.size() < 3) throw ConfigError("a polygon needs at least 3 vertices");
  std::vector<Point> pts(points.begin(), points.end());
  for (const auto& p : pts) {
    if (!p.allFinite()) throw ConfigError("polygon vertex is not finite");
  }
  const Point origin = pts[0];
  for (auto& p : pts) p -= origin;
  pts[0].setZero();

  auto anchor = std::find_if(pts.begin() + 1, pts.end(), [](const Point& p) { return p.squaredNorm() > 0.0; });
  if (anchor == pts.end()) throw ConfigError("polygon has zero perimeter");

  if (!(anchor->y() == 0.0 && anchor->x() > 0.0)) {
    const double r = anchor->norm();
    const double c = anchor->x() / r;
    const double s = anchor->y() / r;
    for (auto& p : pts) p = Point(c * p.x() + s * p.y(), -s * p.x() + c * p.y());
    *anchor = Point(r, 0.0);
  }

  const double per = cyclic_perimeter(pts);
  if (std::abs(per - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
    for (auto& p : pts) p /= per;
  }
  for (auto& p : pts) {
    if (p.y() == 0.0) p.y() = 0.0;  // no negative zeros
  }
  return PolygonConfig(std::move(pts));
}

double PolygonConfig::perimeter() const { return cyclic_perimeter(points_); }

double PolygonConfig::diameter() const { return points_diameter(points_); }

double PolygonConfig::min_pair_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) d = std::min(d, (points_[i] - points_[j]).norm());
  return d;
}

bool PolygonConfig::has_pole(double radius) const { return min_pair_distance() < radius * perimeter(); }

// ---------------------------------------------------------------------------
// TorusConfig

TorusConfig::TorusConfig(std::array<double, 3> radii, double alpha1, double alpha2)
    : radii_(radii), alpha1_(reduce_angle(alpha1)), alpha2_(reduce_angle(alpha2)) {
  for (double r : radii_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("torus radii must be positive and finite");
  }
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2)) throw ConfigError("torus angles must be finite");
}

double chord_distance(double ra, double rb, double angle) {
  const double h = std::sin(0.5 * angle);
  return std::sqrt((ra - rb) * (ra - rb) + 4.0 * ra * rb * h * h);
}

std::array<double, 3> TorusConfig::distances() const {
  const auto& r = radii_;
  return {chord_distance(r[1], r[2], alpha1_), chord_distance(r[2], r[0], alpha2_),
          chord_distance(r[0], r[1], alpha3())};
}

std::vector<Point> TorusConfig::points() const {
  const double t2 = alpha3();
  const double t3 = alpha3() + alpha1_;
  return {Point(radii_[0], 0.0), Point(radii_[1] * std::cos(t2), radii_[1] * std::sin(t2)),
          Point(radii_[2] * std::cos(t3), radii_[2] * std::sin(t3))};
}

double TorusConfig::min_radius() const { return std::min({radii_[0], radii_[1], radii_[2]}); }

bool TorusConfig::has_pole(double radius) const {
  const auto d = distances();
  return std::min({d[0], d[1], d[2]}) < radius * min_radius();
}

// ---------------------------------------------------------------------------
// Operations

Eigen::MatrixXd pairwise_distances(std::span<const Point> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points[i] - points[j]).norm();
  return d;
}

Eigen::MatrixXd pairwise_distances(const PolygonConfig& config) { return pairwise_distances(config.points()); }

Eigen::MatrixXd pairwise_distances(const TorusConfig& config) {
  const auto d = config.distances();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(1, 2) = m(2, 1) = d[0];
  m(0, 2) = m(2, 0) = d[1];
  m(0, 1) = m(1, 0) = d[2];
  return m;
}

Eigen::MatrixXd pairwise_distances(const Configuration& config) {
  return std::visit([](const auto& c) { return pairwise_distances(c); }, config);
}

PolygonConfig apply_involution(const PolygonConfig& config) {
  std::vector<Point> pts = config.points();
  for (auto& p : pts) p.y() = -p.y();
  return PolygonConfig::from_points(pts);
}

TorusConfig apply_involution(const TorusConfig& config) {
  return TorusConfig(config.radii(), -config.alpha1(), -config.alpha2());
}

Configuration apply_involution(const Configuration& config) {
  return std::visit([](const auto& c) -> Configuration { return apply_involution(c); }, config);
}

double alignment_defect(std::span<const Point> points) {
  const double diam = points_diameter(points);
  if (diam == 0.0) return 0.0;
  Point centroid = Point::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Eigen::Matrix2d moment = Eigen::Matrix2d::Zero();
  for (const auto& p : points) moment += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(moment);
  const Point normal = eig.eigenvectors().col(0);
  double defect = 0.0;
  for (const auto& p : points) defect = std::max(defect, std::abs(normal.dot(p - centroid)));
  return defect < kAlignmentTol * diam ? 0.0 : defect;
}

double alignment_defect(const PolygonConfig& config) { return alignment_defect(config.points()); }

double alignment_defect(const TorusConfig& config) { return alignment_defect(config.points()); }

double alignment_defect(const Configuration& config) {
  return std::visit([](const auto& c) { return alignment_defect(c); }, config);
}

std::string SymmetryKey::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rounded.size(); ++i) os << (i ? ":" : "") << rounded[i];
  return os.str();
}

SymmetryKey symmetry_key(const Configuration& config) {
  const Eigen::MatrixXd d = pairwise_distances(config);
  SymmetryKey key;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j)
      key.rounded.push_back(static_cast<std::int64_t>(std::llround(d(i, j) / kKeyResolution)));
  return key;
}

Canonical canonicalize(const Configuration& config) {
  Configuration canon = std::visit(
      [](const auto& c) -> Configuration {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PolygonConfig>) {
          return PolygonConfig::from_points(c.points());
        } else {
          return TorusConfig(c.radii(), c.alpha1(), c.alpha2());
        }
      },
      config);
  SymmetryKey key = symmetry_key(canon);
  return {std::move(canon), std::move(key)};
}

double config_distance(const Configuration& a, const Configuration& b) {
  if (a.index() != b.index()) return std::numeric_limits<double>::infinity();
  if (const auto* pa = std::get_if<PolygonConfig>(&a)) {
    const auto& pb = std::get<PolygonConfig>(b);
    if (pa->size() != pb.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < pa->size(); ++i) d = std::max(d, ((*pa)[i] - pb[i]).cwiseAbs().maxCoeff());
    return d;
  }
  const auto& ta = std::get<TorusConfig>(a);
  const auto& tb = std::get<TorusConfig>(b);
  return std::max(std::abs(reduce_angle(ta.alpha1() - tb.alpha1())),
                  std::abs(reduce_angle(ta.alpha2() - tb.alpha2())));
}

std::vector<Point> config_points(const Configuration& config) {
  return std::visit([](const auto& c) -> std::vector<Point> { return c.points(); }, config);
}

double config_diameter(const Configuration& config) { return points_diameter(config_points(config)); }

bool is_polygon(const Configuration& config) { return std::holds_alternative<PolygonConfig>(config); }

}  // namespace ceq
