#include "coulomb_eq/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ceq {

namespace {

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument("not a number: '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Space parse_space(std::string_view text) {
  if (text.starts_with("polygon:")) {
    const auto v = parse_list(text.substr(8));
    if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 3 || v[0] > 64) {
      throw std::invalid_argument("polygon space needs an integer vertex count >= 3");
    }
    return PolygonSpace{static_cast<int>(v[0])};
  }
  if (text.starts_with("torus:")) {
    const auto v = parse_list(text.substr(6));
    if (v.size() != 3) throw std::invalid_argument("torus space needs three radii");
    for (double r : v) {
      if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("torus radii must be positive");
    }
    return TorusSpace{{v[0], v[1], v[2]}};
  }
  throw std::invalid_argument("unknown space: " + std::string(text));
}

std::string space_name(const Space& space) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* p = std::get_if<PolygonSpace>(&space)) {
    os << "polygon:" << p->n;
  } else {
    const auto& r = std::get<TorusSpace>(space).radii;
    os << "torus:" << r[0] << ',' << r[1] << ',' << r[2];
  }
  return os.str();
}

std::size_t charge_count(const Space& space) {
  if (const auto* p = std::get_if<PolygonSpace>(&space)) return static_cast<std::size_t>(p->n);
  return 3;
}

void SolveSettings::validate() const {
  if (grid_density < 8) throw std::invalid_argument("grid density must be at least 8");
  if (!(newton_tol > 0.0) || !(dedup_tol > 0.0) || !(pole_radius > 0.0) || max_iters <= 0 || max_seeds == 0) {
    throw std::invalid_argument("solver settings must be positive");
  }
}

double gradient_tolerance(const SolveSettings& settings, const ChargeVector& q) {
  const double s = q.max_abs();
  return settings.newton_tol * std::max(1.0, s * s);
}

// ---------------------------------------------------------------------------
// Classification of a single configuration

namespace {

double charge_scale(const ChargeVector& q) {
  const double s = q.max_abs();
  return std::max(1.0, s * s);
}

double torus_sine_residual(const TorusConfig& c, const ChargeVector& q, const PotentialSpec& spec) {
  // Lagrange quantities f_i'(alpha_i); equal at a critical point. For the
  // Coulomb kernel f_i' = -q1 q2 q3 r1 r2 r3 sin(alpha_i) / (d_i^3 r_i q_i).
  const auto& r = c.radii();
  const auto a = c.angles();
  const auto d = c.distances();
  const std::array<double, 3> w{q[1] * q[2], q[2] * q[0], q[0] * q[1]};
  const std::array<std::pair<double, double>, 3> rr{{{r[1], r[2]}, {r[2], r[0]}, {r[0], r[1]}}};
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) {
    f[i] = w[i] * kernel_eval(spec, d[i]).first * rr[i].first * rr[i].second * std::sin(a[i]) / d[i];
  }
  const double spread = std::max({f[0], f[1], f[2]}) - std::min({f[0], f[1], f[2]});
  return spread / charge_scale(q);
}

double triangle_relation_residual(const PolygonConfig& c, const ChargeVector& q) {
  // l1^2 q1 = l2^2 q2 = l3^2 q3 with l1 = d23, l2 = d31, l3 = d12.
  const auto& p = c.points();
  const std::array<double, 3> l{(p[1] - p[2]).norm(), (p[2] - p[0]).norm(), (p[0] - p[1]).norm()};
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) v[i] = l[i] * l[i] * q[i];
  const double mean = (v[0] + v[1] + v[2]) / 3.0;
  return (std::max({v[0], v[1], v[2]}) - std::min({v[0], v[1], v[2]})) / std::abs(mean);
}

}  // namespace

CriticalPoint describe_point(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec) {
  const EnergyReport rep = evaluate(config, q, spec);
  if (rep.pole_flag) throw PoleError("critical point candidate sits at a pole");
  CriticalPoint cp{config, 0.0, 0.0, 0.0, {}, 0, false, false, {}, std::nullopt};
  cp.energy = rep.value;
  cp.grad_norm = rep.gradient.norm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.hessian, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  cp.hessian_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  double max_abs = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (double v : cp.hessian_eigenvalues) {
    max_abs = std::max(max_abs, std::abs(v));
    min_abs = std::min(min_abs, std::abs(v));
  }
  const double thr = kDegeneracyTol * std::max(1.0, max_abs);
  cp.degenerate = min_abs < thr;
  cp.morse_index = static_cast<int>(
      std::count_if(cp.hessian_eigenvalues.begin(), cp.hessian_eigenvalues.end(), [&](double v) { return v < -thr; }));
  cp.aligned = alignment_defect(config) == 0.0;
  cp.key = symmetry_key(config);

  if (const auto* poly = std::get_if<PolygonConfig>(&config)) {
    const PolygonDerivatives der = polygon_derivatives(poly->points(), q, spec);
    const ConstrainedSystem cs = constrained_system(der, poly->points());
    cp.stationarity_residual = cs.lagrange_residual.norm() / charge_scale(q);
    if (poly->size() == 3 && !cp.aligned && spec.kind == PotentialSpec::Kind::coulomb) {
      cp.stationarity_residual = std::max(cp.stationarity_residual, triangle_relation_residual(*poly, q));
    }
  } else {
    cp.stationarity_residual = torus_sine_residual(std::get<TorusConfig>(config), q, spec);
  }
  return cp;
}

// ---------------------------------------------------------------------------
// Closed forms

std::array<PolygonConfig, 3> solve_line_three(const ChargeVector& q) {
  if (q.size() != 3 || !q.all_positive()) throw std::invalid_argument("three positive charges required");
  auto segment = [&](std::size_t mid) {
    const std::size_t a = (mid + 1) % 3;
    const std::size_t b = (mid + 2) % 3;
    // Outer vertices a, b at -da and +db from the intermediate one; da + db = 1/2.
    const double sa = std::sqrt(q[a]);
    const double sb = std::sqrt(q[b]);
    const double da = 0.5 * sa / (sa + sb);
    std::array<Point, 3> pts;
    pts[mid] = Point(0.0, 0.0);
    pts[a] = Point(-da, 0.0);
    pts[b] = Point(0.5 - da, 0.0);
    return PolygonConfig::from_points(pts);
  };
  return {segment(0), segment(1), segment(2)};
}

std::size_t line_minimum_index(const ChargeVector& q) {
  const auto v = q.values();
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::optional<PolygonConfig> critical_triangle(const ChargeVector& q) {
  if (q.size() != 3 || !q.all_positive()) throw std::invalid_argument("three positive charges required");
  std::array<double, 3> s{};
  for (int i = 0; i < 3; ++i) s[i] = 1.0 / std::sqrt(q[i]);
  const double total = s[0] + s[1] + s[2];
  for (int i = 0; i < 3; ++i) {
    if (!(2.0 * s[i] < total)) return std::nullopt;
  }
  const double l1 = s[0] / total;  // d23
  const double l2 = s[1] / total;  // d31
  const double l3 = s[2] / total;  // d12
  const double x = (l3 * l3 + l2 * l2 - l1 * l1) / (2.0 * l3);
  const double y = std::sqrt(std::max(0.0, l2 * l2 - x * x));
  const std::array<Point, 3> pts{Point(0.0, 0.0), Point(l3, 0.0), Point(x, y)};
  return PolygonConfig::from_points(pts);
}

std::vector<Configuration> enumerate_aligned(const Space& space, const ChargeVector& q) {
  std::vector<Configuration> out;
  if (const auto* poly = std::get_if<PolygonSpace>(&space)) {
    if (poly->n != 3) throw std::invalid_argument("aligned enumeration is closed-form only for n = 3");
    for (const auto& c : solve_line_three(q)) out.emplace_back(c);
    return out;
  }
  const auto& r = std::get<TorusSpace>(space).radii;
  // (alpha1, alpha2) for (pi,pi,0), (0,pi,pi), (pi,0,pi), (0,0,0).
  constexpr std::array<std::pair<double, double>, 4> labels{{{kPi, kPi}, {0.0, kPi}, {kPi, 0.0}, {0.0, 0.0}}};
  for (const auto& [a1, a2] : labels) {
    TorusConfig c(r, a1, a2);
    if (!c.has_pole()) out.emplace_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Newton polishing

namespace {

struct PolygonState {
  std::vector<Point> pts;
  double mu = 0.0;
  Eigen::VectorXd residual;  // Lagrange system
  Eigen::MatrixXd jacobian;
  double grad_norm = 0.0;
};

// Lagrange system F = [grad E - mu grad g; g - 1; y2] in the full coordinates,
// unknowns (x2, y2, ..., xn, yn, mu).
PolygonState polygon_state(std::vector<Point> pts, double mu, const ChargeVector& q, const PotentialSpec& spec) {
  const PolygonDerivatives der = polygon_derivatives(pts, q, spec);
  const ConstrainedSystem cs = constrained_system(der, pts);
  const Eigen::Index m = der.gradient.size();
  PolygonState s;
  s.mu = mu;
  s.residual.resize(m + 2);
  s.residual.head(m) = der.gradient - mu * der.perimeter_gradient;
  s.residual(m) = der.perimeter - 1.0;
  s.residual(m + 1) = pts[1].y();
  s.jacobian = Eigen::MatrixXd::Zero(m + 2, m + 1);
  s.jacobian.topLeftCorner(m, m) = der.hessian - mu * der.perimeter_hessian;
  s.jacobian.block(0, m, m, 1) = -der.perimeter_gradient;
  s.jacobian.block(m, 0, 1, m) = der.perimeter_gradient.transpose();
  s.jacobian(m + 1, 1) = 1.0;
  s.grad_norm = cs.reduced_gradient.norm();
  s.pts = std::move(pts);
  return s;
}

double least_squares_multiplier(const std::vector<Point>& pts, const ChargeVector& q, const PotentialSpec& spec) {
  const PolygonDerivatives der = polygon_derivatives(pts, q, spec);
  return der.perimeter_gradient.dot(der.gradient) / der.perimeter_gradient.squaredNorm();
}

std::optional<std::vector<Point>> retract(const std::vector<Point>& pts, double pole_radius) {
  try {
    PolygonConfig c = PolygonConfig::from_points(pts);
    if (c.has_pole(pole_radius)) return std::nullopt;
    return c.points();
  } catch (const ConfigError&) {
    return std::nullopt;
  }
}

// One accepted Levenberg-Marquardt step, or nullopt when damping saturates.
template <typename State, typename Trial>
std::optional<State> lm_step(const State& s, double& lambda, Trial&& trial) {
  const Eigen::MatrixXd a = s.jacobian.transpose() * s.jacobian;
  const Eigen::VectorXd b = s.jacobian.transpose() * s.residual;
  const double fnorm = s.residual.norm();
  const double scale = std::max(a.diagonal().maxCoeff(), 1e-300);
  while (lambda < 1e10) {
    Eigen::MatrixXd damped = a;
    damped.diagonal().array() += lambda * (a.diagonal().array() + 1e-12 * scale);
    const Eigen::VectorXd delta = damped.ldlt().solve(-b);
    if (delta.allFinite()) {
      std::optional<State> next = trial(delta);
      if (next && next->residual.norm() < fnorm) {
        lambda = std::max(lambda * 0.1, 1e-14);
        return next;
      }
    }
    lambda *= 10.0;
  }
  return std::nullopt;
}

std::optional<PolygonConfig> polish_polygon(const PolygonConfig& seed, const ChargeVector& q,
                                            const PotentialSpec& spec, const SolveSettings& settings,
                                            bool allow_snap) {
  if (seed.has_pole(settings.pole_radius)) return std::nullopt;
  const double tol = gradient_tolerance(settings, q);
  const Eigen::Index m = static_cast<Eigen::Index>(2 * (seed.size() - 1));
  auto trial = [&](const PolygonState& s, const Eigen::VectorXd& delta) -> std::optional<PolygonState> {
    std::vector<Point> moved = s.pts;
    for (std::size_t i = 1; i < moved.size(); ++i) moved[i] += delta.segment<2>(2 * (static_cast<Eigen::Index>(i) - 1));
    auto r = retract(moved, settings.pole_radius);
    if (!r) return std::nullopt;
    return polygon_state(std::move(*r), s.mu + delta(m), q, spec);
  };

  // After the tolerance is met, keep stepping while the gradient still shrinks
  // (linear convergence at degenerate points).
  std::optional<PolygonState> done;
  try {
    std::vector<Point> pts = seed.points();
    const double mu = least_squares_multiplier(pts, q, spec);
    PolygonState s = polygon_state(std::move(pts), mu, q, spec);
    double lambda = 1e-6;
    bool converged = false;
    for (int it = 0; it < settings.max_iters; ++it) {
      if (s.grad_norm <= tol) converged = true;
      std::optional<PolygonState> next =
          lm_step(s, lambda, [&](const Eigen::VectorXd& delta) { return trial(s, delta); });
      if (!next) break;
      if (converged && !(next->grad_norm < 0.9 * s.grad_norm)) break;
      s = std::move(*next);
    }
    if (s.grad_norm <= tol) done = std::move(s);
  } catch (const PoleError&) {
    return std::nullopt;
  } catch (const ConfigError&) {
    return std::nullopt;
  }
  if (!done) return std::nullopt;
  PolygonConfig result = PolygonConfig::from_points(done->pts);

  // Snap nearly aligned results (slow convergence at degenerate aligned points).
  if (allow_snap) {
    const double defect = alignment_defect(result);
    if (defect > 0.0 && defect < 1e-5 * result.diameter()) {
      std::vector<Point> flat = result.points();
      for (auto& p : flat) p.y() = 0.0;
      if (auto r = retract(flat, settings.pole_radius)) {
        if (auto snapped = polish_polygon(PolygonConfig::from_points(*r), q, spec, settings, false)) {
          if (alignment_defect(*snapped) == 0.0) return snapped;
        }
      }
    }
  }
  return result;
}

struct TorusState {
  double a1 = 0.0;
  double a2 = 0.0;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double grad_norm = 0.0;
};

std::optional<TorusState> torus_state(const std::array<double, 3>& radii, double a1, double a2,
                                      const ChargeVector& q, const PotentialSpec& spec, double pole_radius) {
  TorusConfig c(radii, a1, a2);
  if (c.has_pole(pole_radius)) return std::nullopt;
  const EnergyReport rep = evaluate(c, q, spec);
  if (rep.pole_flag) return std::nullopt;
  return TorusState{c.alpha1(), c.alpha2(), rep.gradient, rep.hessian, rep.gradient.norm()};
}

std::optional<TorusConfig> polish_torus(const TorusConfig& seed, const ChargeVector& q, const PotentialSpec& spec,
                                        const SolveSettings& settings, bool allow_snap) {
  const double tol = gradient_tolerance(settings, q);
  const auto& radii = seed.radii();
  auto start = torus_state(radii, seed.alpha1(), seed.alpha2(), q, spec, settings.pole_radius);
  if (!start) return std::nullopt;
  TorusState s = *start;
  double lambda = 1e-6;
  bool converged = false;
  for (int it = 0; it < settings.max_iters; ++it) {
    if (s.grad_norm <= tol) converged = true;
    std::optional<TorusState> next = lm_step(s, lambda, [&](const Eigen::VectorXd& delta) {
      return torus_state(radii, s.a1 + delta(0), s.a2 + delta(1), q, spec, settings.pole_radius);
    });
    if (!next) break;
    if (converged && !(next->grad_norm < 0.9 * s.grad_norm)) break;
    s = *next;
  }
  if (!(s.grad_norm <= tol)) return std::nullopt;
  TorusConfig result(radii, s.a1, s.a2);

  if (allow_snap && alignment_defect(result) > 0.0) {
    auto near_line = [](double a) { return std::abs(std::sin(a)) < 1e-5; };
    if (near_line(s.a1) && near_line(s.a2)) {
      auto snap = [](double a) { return std::abs(a) < 0.5 * kPi ? 0.0 : kPi; };
      TorusConfig flat(radii, snap(s.a1), snap(s.a2));
      if (auto snapped = polish_torus(flat, q, spec, settings, false)) return snapped;
    }
  }
  return result;
}

}  // namespace

std::optional<Configuration> polish(const Configuration& seed, const ChargeVector& q, const PotentialSpec& spec,
                                    const SolveSettings& settings) {
  if (const auto* poly = std::get_if<PolygonConfig>(&seed)) {
    if (auto r = polish_polygon(*poly, q, spec, settings, true)) return Configuration(*r);
    return std::nullopt;
  }
  if (auto r = polish_torus(std::get<TorusConfig>(seed), q, spec, settings, true)) return Configuration(*r);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Multistart

namespace {

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr std::array<unsigned, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Unit-cube samples: full grid of cell centres or, above max_seeds, a Halton sequence.
std::vector<std::vector<double>> unit_samples(std::size_t dim, int density, std::size_t max_seeds) {
  std::vector<std::vector<double>> out;
  double total = std::pow(static_cast<double>(density), static_cast<double>(dim));
  if (total <= static_cast<double>(max_seeds)) {
    const auto count = static_cast<std::size_t>(total);
    out.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::vector<double> u(dim);
      std::size_t rest = idx;
      for (std::size_t k = 0; k < dim; ++k) {
        u[k] = (static_cast<double>(rest % density) + 0.5) / density;
        rest /= density;
      }
      out.push_back(std::move(u));
    }
    return out;
  }
  if (dim > kPrimes.size()) throw std::invalid_argument("too many chart dimensions for Halton seeding");
  out.reserve(max_seeds);
  for (std::size_t idx = 1; idx <= max_seeds; ++idx) {
    std::vector<double> u(dim);
    for (std::size_t k = 0; k < dim; ++k) u[k] = radical_inverse(idx, kPrimes[k]);
    out.push_back(std::move(u));
  }
  return out;
}

unsigned thread_count(const SolveSettings& settings) {
  if (settings.threads > 0) return settings.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::vector<Configuration> make_seeds(const Space& space, const ChargeVector& q, const SolveSettings& settings) {
  std::vector<Configuration> seeds;
  if (const auto* poly = std::get_if<PolygonSpace>(&space)) {
    const auto n = static_cast<std::size_t>(poly->n);
    // p1 = 0, p2 = (1, 0); p3..pn drawn from [-1, 2] x [-1.5, 1.5].
    for (const auto& u : unit_samples(2 * (n - 2), settings.grid_density, settings.max_seeds)) {
      std::vector<Point> pts(n);
      pts[0] = Point(0.0, 0.0);
      pts[1] = Point(1.0, 0.0);
      for (std::size_t i = 2; i < n; ++i) pts[i] = Point(-1.0 + 3.0 * u[2 * (i - 2)], -1.5 + 3.0 * u[2 * (i - 2) + 1]);
      try {
        PolygonConfig c = PolygonConfig::from_points(pts);
        if (!c.has_pole(settings.pole_radius)) seeds.emplace_back(std::move(c));
      } catch (const ConfigError&) {
      }
    }
    if (n == 3 && q.all_positive()) {
      for (auto& c : enumerate_aligned(space, q)) seeds.push_back(std::move(c));
      if (auto tri = critical_triangle(q)) {
        seeds.emplace_back(*tri);
        seeds.emplace_back(apply_involution(*tri));
      }
    }
    return seeds;
  }
  const auto& r = std::get<TorusSpace>(space).radii;
  const int dens = settings.grid_density;
  for (int i = 0; i < dens; ++i) {
    for (int j = 0; j < dens; ++j) {
      TorusConfig c(r, -kPi + (i + 0.5) * kTwoPi / dens, -kPi + (j + 0.5) * kTwoPi / dens);
      if (!c.has_pole(settings.pole_radius)) seeds.emplace_back(c);
    }
  }
  for (auto& c : enumerate_aligned(space, q)) seeds.push_back(std::move(c));
  return seeds;
}

SolveResult find_critical_points(const Space& space, const ChargeVector& q, const PotentialSpec& spec,
                                 const SolveSettings& settings) {
  settings.validate();
  if (q.size() != charge_count(space)) throw std::invalid_argument("charge count does not match the space");

  const std::vector<Configuration> seeds = make_seeds(space, q, settings);
  std::vector<std::optional<Configuration>> polished(seeds.size());
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < seeds.size(); i = next++) {
        try {
          polished[i] = polish(seeds[i], q, spec, settings);
        } catch (const std::exception&) {
          polished[i].reset();
        }
      }
    };
    const unsigned nthreads = std::min<unsigned>(thread_count(settings), static_cast<unsigned>(seeds.size()) + 1);
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
  }

  SolveResult result;
  result.seeds = seeds.size();
  const double tol = gradient_tolerance(settings, q);
  std::vector<CriticalPoint> accepted;
  auto known = [&](const Configuration& c) {
    return std::any_of(accepted.begin(), accepted.end(),
                       [&](const CriticalPoint& a) { return config_distance(a.config, c) < settings.dedup_tol; });
  };
  auto admit = [&](const Configuration& c) {
    if (known(c)) return;
    CriticalPoint cp = describe_point(c, q, spec);
    if (cp.grad_norm <= tol && cp.stationarity_residual <= 1e-9) accepted.push_back(std::move(cp));
  };
  for (const auto& p : polished) {
    if (!p) continue;
    ++result.converged;
    admit(*p);
  }
  // Non-aligned points come in mirror pairs; keep both.
  const std::size_t base = accepted.size();
  for (std::size_t i = 0; i < base; ++i) {
    if (!accepted[i].aligned) admit(apply_involution(accepted[i].config));
  }

  auto coords = [](const CriticalPoint& cp) {
    std::vector<double> v;
    for (const auto& p : config_points(cp.config)) {
      v.push_back(p.x());
      v.push_back(p.y());
    }
    return v;
  };
  std::sort(accepted.begin(), accepted.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.key != b.key) return a.key < b.key;
    return coords(a) < coords(b);
  });
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (accepted[i].aligned) continue;
    const Configuration mirror = apply_involution(accepted[i].config);
    for (std::size_t j = 0; j < accepted.size(); ++j) {
      if (j != i && config_distance(mirror, accepted[j].config) < settings.dedup_tol) {
        accepted[i].symmetry_partner = j;
        break;
      }
    }
  }
  result.points = std::move(accepted);

  if (const auto* poly = std::get_if<PolygonSpace>(&space); poly && poly->n >= 4) {
    result.coverage_note =
        "multistart seeding is heuristic for n >= 4; critical points with thin basins may be missed "
        "(increase grid density or max seeds)";
  }
  return result;
}

}  // namespace ceq
