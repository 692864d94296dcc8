#include "coulomb_eq/potentials.hpp"

#include <Eigen/QR>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace ceq {

PotentialSpec PotentialSpec::power_law(double k) {
  if (!(k > 1.0) || !std::isfinite(k)) throw std::invalid_argument("power-law exponent must exceed 1");
  return {Kind::power_law, k};
}

PotentialSpec PotentialSpec::parse(std::string_view text) {
  if (text == "coulomb") return coulomb();
  if (text == "log") return logarithmic();
  if (text.starts_with("power:")) {
    const std::string_view tail = text.substr(6);
    double k = 0.0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("bad power-law exponent: " + std::string(tail));
    }
    return power_law(k);
  }
  throw std::invalid_argument("unknown potential: " + std::string(text));
}

std::string PotentialSpec::name() const {
  switch (kind) {
    case Kind::coulomb:
      return "coulomb";
    case Kind::logarithmic:
      return "log";
    case Kind::power_law: {
      std::ostringstream os;
      os.precision(17);
      os << "power:" << exponent;
      return os.str();
    }
  }
  return "coulomb";
}

KernelValues kernel_eval(const PotentialSpec& spec, double d) {
  if (!(d > 0.0)) throw std::domain_error("kernel evaluated at nonpositive distance");
  switch (spec.kind) {
    case PotentialSpec::Kind::coulomb: {
      const double inv = 1.0 / d;
      return {inv, -inv * inv, 2.0 * inv * inv * inv};
    }
    case PotentialSpec::Kind::power_law: {
      const double k = spec.exponent;
      const double v = std::pow(d, -k);
      return {v, -k * v / d, k * (k + 1.0) * v / (d * d)};
    }
    case PotentialSpec::Kind::logarithmic:
      return {std::log(d), 1.0 / d, -1.0 / (d * d)};
  }
  throw std::logic_error("unreachable potential kind");
}

// ---------------------------------------------------------------------------
// Polygon, full coordinates

namespace {

// Adds w * f(|pi - pj|) to value/gradient/hessian. Point 0 is pinned and has
// no rows; point i >= 1 owns rows 2(i-1), 2(i-1)+1.
void add_pair(std::span<const Point> pts, std::size_t i, std::size_t j, double w, const KernelValues& k,
              double d, double& value, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  value += w * k.value;
  const Point u = (pts[i] - pts[j]) / d;
  const Eigen::Matrix2d block =
      w * (k.second * u * u.transpose() + (k.first / d) * (Eigen::Matrix2d::Identity() - u * u.transpose()));
  const Point g = w * k.first * u;
  const Eigen::Index ri = 2 * (static_cast<Eigen::Index>(i) - 1);
  const Eigen::Index rj = 2 * (static_cast<Eigen::Index>(j) - 1);
  if (i > 0) {
    grad.segment<2>(ri) += g;
    hess.block<2, 2>(ri, ri) += block;
  }
  if (j > 0) {
    grad.segment<2>(rj) -= g;
    hess.block<2, 2>(rj, rj) += block;
  }
  if (i > 0 && j > 0) {
    hess.block<2, 2>(ri, rj) -= block;
    hess.block<2, 2>(rj, ri) -= block;
  }
}

void require_polygon_charges(std::span<const Point> pts, const ChargeVector& q) {
  if (q.size() != pts.size()) throw std::invalid_argument("charge count does not match vertex count");
}

}  // namespace

PolygonDerivatives polygon_derivatives(std::span<const Point> pts, const ChargeVector& q,
                                       const PotentialSpec& spec) {
  require_polygon_charges(pts, q);
  const std::size_t n = pts.size();
  const auto m = static_cast<Eigen::Index>(2 * (n - 1));
  PolygonDerivatives out;
  out.gradient = Eigen::VectorXd::Zero(m);
  out.hessian = Eigen::MatrixXd::Zero(m, m);
  out.perimeter_gradient = Eigen::VectorXd::Zero(m);
  out.perimeter_hessian = Eigen::MatrixXd::Zero(m, m);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (!(d > 0.0)) throw PoleError("coincident vertices");
      add_pair(pts, i, j, q[i] * q[j], kernel_eval(spec, d), d, out.energy, out.gradient, out.hessian);
    }
  }
  const KernelValues edge{0.0, 1.0, 0.0};  // phi(d) = d, value accumulated separately
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double d = (pts[i] - pts[j]).norm();
    if (!(d > 0.0)) throw PoleError("coincident consecutive vertices");
    double unused = 0.0;
    add_pair(pts, std::min(i, j), std::max(i, j), 1.0, edge, d, unused, out.perimeter_gradient,
             out.perimeter_hessian);
    out.perimeter += d;
  }
  return out;
}

Eigen::VectorXd rotation_generator(std::span<const Point> pts) {
  const auto m = static_cast<Eigen::Index>(2 * (pts.size() - 1));
  Eigen::VectorXd v(m);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto r = 2 * (static_cast<Eigen::Index>(i) - 1);
    v(r) = -pts[i].y();
    v(r + 1) = pts[i].x();
  }
  return v;
}

namespace {

Eigen::VectorXd perimeter_gradient(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * (n - 1)));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Point diff = pts[i] - pts[j];
    const double d = diff.norm();
    if (!(d > 0.0)) throw PoleError("coincident consecutive vertices");
    const Point u = diff / d;
    if (i > 0) g.segment<2>(2 * (static_cast<Eigen::Index>(i) - 1)) += u;
    if (j > 0) g.segment<2>(2 * (static_cast<Eigen::Index>(j) - 1)) -= u;
  }
  return g;
}

Eigen::MatrixXd complement_basis(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::MatrixXd constraints(a.size(), 2);
  constraints.col(0) = a;
  constraints.col(1) = b;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(a.size() - 2);
}

}  // namespace

Eigen::MatrixXd tangent_basis(std::span<const Point> pts) {
  return complement_basis(perimeter_gradient(pts), rotation_generator(pts));
}

ConstrainedSystem constrained_system(const PolygonDerivatives& der, std::span<const Point> pts) {
  ConstrainedSystem cs;
  const Eigen::VectorXd& gg = der.perimeter_gradient;
  cs.multiplier = gg.dot(der.gradient) / gg.squaredNorm();
  cs.lagrange_residual = der.gradient - cs.multiplier * gg;
  cs.tangent_basis = complement_basis(gg, rotation_generator(pts));
  cs.reduced_gradient = cs.tangent_basis.transpose() * der.gradient;
  const Eigen::MatrixXd lagrangian = der.hessian - cs.multiplier * der.perimeter_hessian;
  cs.reduced_hessian = cs.tangent_basis.transpose() * lagrangian * cs.tangent_basis;
  cs.reduced_hessian = 0.5 * (cs.reduced_hessian + cs.reduced_hessian.transpose()).eval();
  return cs;
}

// ---------------------------------------------------------------------------
// Energy

double energy(std::span<const Point> pts, const ChargeVector& q, const PotentialSpec& spec) {
  require_polygon_charges(pts, q);
  double e = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
      e += q[i] * q[j] * kernel_eval(spec, d).value;
    }
  }
  return e;
}

double energy(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec) {
  if (config.has_pole()) return std::numeric_limits<double>::infinity();
  return energy(config.points(), q, spec);
}

namespace {

void require_torus_charges(const ChargeVector& q) {
  if (q.size() != 3) throw std::invalid_argument("torus configurations carry exactly three charges");
}

// Pair weights Q_i for d_i: Q1 = q2 q3, Q2 = q3 q1, Q3 = q1 q2.
std::array<double, 3> torus_weights(const ChargeVector& q) { return {q[1] * q[2], q[2] * q[0], q[0] * q[1]}; }

struct TorusTerm {
  double value;
  double first;   // d/d alpha_i
  double second;  // d^2/d alpha_i^2
};

// f_i(alpha) = w * phi(d(alpha)) with d^2 = ra^2 + rb^2 - 2 ra rb cos(alpha).
TorusTerm torus_term(const PotentialSpec& spec, double w, double ra, double rb, double alpha) {
  const double d = chord_distance(ra, rb, alpha);
  const KernelValues k = kernel_eval(spec, d);
  const double dd = ra * rb * std::sin(alpha) / d;
  const double ddd = (ra * rb * std::cos(alpha) - dd * dd) / d;
  return {w * k.value, w * k.first * dd, w * (k.second * dd * dd + k.first * ddd)};
}

}  // namespace

double energy(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec) {
  require_torus_charges(q);
  if (config.has_pole()) return std::numeric_limits<double>::infinity();
  const auto w = torus_weights(q);
  const auto d = config.distances();
  double e = 0.0;
  for (int i = 0; i < 3; ++i) e += w[i] * kernel_eval(spec, d[i]).value;
  return e;
}

double energy(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  return std::visit([&](const auto& c) { return energy(c, q, spec); }, config);
}

EnergyReport evaluate(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec) {
  require_polygon_charges(config.points(), q);
  EnergyReport rep;
  if (config.has_pole()) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.pole_flag = true;
    return rep;
  }
  const PolygonDerivatives der = polygon_derivatives(config.points(), q, spec);
  const ConstrainedSystem cs = constrained_system(der, config.points());
  rep.value = der.energy;
  rep.gradient = cs.reduced_gradient;
  rep.hessian = cs.reduced_hessian;
  return rep;
}

EnergyReport evaluate(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec) {
  require_torus_charges(q);
  EnergyReport rep;
  if (config.has_pole()) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.pole_flag = true;
    return rep;
  }
  const auto w = torus_weights(q);
  const auto& r = config.radii();
  const auto a = config.angles();
  const TorusTerm f1 = torus_term(spec, w[0], r[1], r[2], a[0]);
  const TorusTerm f2 = torus_term(spec, w[1], r[2], r[0], a[1]);
  const TorusTerm f3 = torus_term(spec, w[2], r[0], r[1], a[2]);
  // alpha3 = 2 pi - alpha1 - alpha2
  rep.value = f1.value + f2.value + f3.value;
  rep.gradient = Eigen::Vector2d(f1.first - f3.first, f2.first - f3.first);
  Eigen::Matrix2d h;
  h << f1.second + f3.second, f3.second, f3.second, f2.second + f3.second;
  rep.hessian = h;
  return rep;
}

EnergyReport evaluate(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  return std::visit([&](const auto& c) { return evaluate(c, q, spec); }, config);
}

Eigen::VectorXd gradient(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  EnergyReport rep = evaluate(config, q, spec);
  if (rep.pole_flag) throw PoleError("gradient requested at a pole");
  return rep.gradient;
}

Eigen::MatrixXd hessian(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  EnergyReport rep = evaluate(config, q, spec);
  if (rep.pole_flag) throw PoleError("hessian requested at a pole");
  return rep.hessian;
}

double default_fd_step(const Configuration& config) {
  if (const auto* t = std::get_if<TorusConfig>(&config)) {
    // Angular scale on which the closest pair changes: d_i / sqrt(r_j r_k).
    const auto d = t->distances();
    const auto& r = t->radii();
    const double s = std::min({d[0] / std::sqrt(r[1] * r[2]), d[1] / std::sqrt(r[2] * r[0]),
                               d[2] / std::sqrt(r[0] * r[1])});
    return 1e-4 * s;
  }
  return 1e-5 * config_diameter(config);
}

// ---------------------------------------------------------------------------
// Finite-difference oracles

namespace {

void check_step(double step, double min_distance, double scale) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (min_distance - 2.0 * step <= kPoleRadius * scale) {
    throw PoleError("finite-difference stencil reaches the pole radius");
  }
}

// Generic central-difference gradient / Hessian of f over `dim` coordinates.
template <typename F>
Eigen::VectorXd central_gradient(F&& f, Eigen::Index dim, double h) {
  Eigen::VectorXd g(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(i) = h;
    g(i) = (f(e) - f(-e)) / (2.0 * h);
  }
  return g;
}

template <typename F>
Eigen::MatrixXd central_hessian(F&& f, Eigen::Index dim, double h) {
  Eigen::MatrixXd hm(dim, dim);
  const double f0 = f(Eigen::VectorXd::Zero(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(dim);
    ei(i) = h;
    hm(i, i) = (f(ei) - 2.0 * f0 + f(-ei)) / (h * h);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      Eigen::VectorXd ej = Eigen::VectorXd::Zero(dim);
      ej(j) = h;
      const double v = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4.0 * h * h);
      hm(i, j) = hm(j, i) = v;
    }
  }
  return hm;
}

double torus_min_distance(const TorusConfig& c) {
  const auto d = c.distances();
  return std::min({d[0], d[1], d[2]});
}

// Angular step translated into a length bound: chords move at most r_max * h.
void check_torus_step(const TorusConfig& c, double step) {
  const double rmax = std::max({c.radii()[0], c.radii()[1], c.radii()[2]});
  check_step(step * rmax, torus_min_distance(c), c.min_radius());
}

}  // namespace

Eigen::VectorXd fd_gradient(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                            double step) {
  check_torus_step(config, step);
  auto f = [&](const Eigen::VectorXd& e) {
    return energy(TorusConfig(config.radii(), config.alpha1() + e(0), config.alpha2() + e(1)), q, spec);
  };
  return central_gradient(f, 2, step);
}

Eigen::MatrixXd fd_hessian(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                           double step) {
  check_torus_step(config, step);
  auto f = [&](const Eigen::VectorXd& e) {
    return energy(TorusConfig(config.radii(), config.alpha1() + e(0), config.alpha2() + e(1)), q, spec);
  };
  return central_hessian(f, 2, step);
}

namespace {

std::vector<Point> displaced(std::span<const Point> pts, const Eigen::VectorXd& full) {
  std::vector<Point> out(pts.begin(), pts.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] += full.segment<2>(2 * (static_cast<Eigen::Index>(i) - 1));
  return out;
}

double min_distance(std::span<const Point> pts) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, (pts[i] - pts[j]).norm());
  return d;
}

double raw_perimeter(std::span<const Point> pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (pts[(i + 1) % pts.size()] - pts[i]).norm();
  return s;
}

}  // namespace

Eigen::VectorXd fd_full_gradient(std::span<const Point> pts, const ChargeVector& q, const PotentialSpec& spec,
                                 double step) {
  check_step(step, min_distance(pts), raw_perimeter(pts));
  auto f = [&](const Eigen::VectorXd& e) { return energy(displaced(pts, e), q, spec); };
  return central_gradient(f, static_cast<Eigen::Index>(2 * (pts.size() - 1)), step);
}

Eigen::MatrixXd fd_full_hessian(std::span<const Point> pts, const ChargeVector& q, const PotentialSpec& spec,
                                double step) {
  check_step(step, min_distance(pts), raw_perimeter(pts));
  auto f = [&](const Eigen::VectorXd& e) { return energy(displaced(pts, e), q, spec); };
  return central_hessian(f, static_cast<Eigen::Index>(2 * (pts.size() - 1)), step);
}

namespace {

// E(R(x + Z t)) with R the rescaling retraction onto perimeter 1.
auto retracted_energy(const PolygonConfig& config, const Eigen::MatrixXd& basis, const ChargeVector& q,
                      const PotentialSpec& spec) {
  return [&config, basis, &q, &spec](const Eigen::VectorXd& t) {
    std::vector<Point> pts = displaced(config.points(), basis * t);
    const double per = raw_perimeter(pts);
    for (auto& p : pts) p /= per;
    return energy(pts, q, spec);
  };
}

}  // namespace

Eigen::VectorXd fd_gradient(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                            double step) {
  check_step(step, config.min_pair_distance(), config.perimeter());
  const Eigen::MatrixXd basis = tangent_basis(config.points());
  return central_gradient(retracted_energy(config, basis, q, spec), basis.cols(), step);
}

Eigen::MatrixXd fd_hessian(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                           double step) {
  check_step(step, config.min_pair_distance(), config.perimeter());
  const Eigen::MatrixXd basis = tangent_basis(config.points());
  return central_hessian(retracted_energy(config, basis, q, spec), basis.cols(), step);
}

double dilation_derivative(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec) {
  if (config.has_pole()) throw PoleError("dilation derivative requested at a pole");
  const auto& pts = config.points();
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      s += q[i] * q[j] * kernel_eval(spec, d).first * d;
    }
  }
  return s;
}

}  // namespace ceq
