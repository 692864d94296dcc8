#include "coulomb_eq/verification.hpp"

#include "coulomb_eq/bifurcation.hpp"
#include "coulomb_eq/inverse.hpp"
#include "coulomb_eq/io.hpp"
#include "coulomb_eq/morse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace ceq {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) { return format_double(v); }

SolveSettings base_settings(const VerifyOptions& opt) {
  SolveSettings s;
  s.threads = opt.threads;
  return s;
}

double dist(const Point& a, const Point& b) { return (a - b).norm(); }

// Vertex lying between the other two of an aligned triangle, or -1.
int intermediate_vertex(const PolygonConfig& c) {
  const auto& p = c.points();
  for (int k = 0; k < 3; ++k) {
    const auto& a = p[static_cast<std::size_t>((k + 1) % 3)];
    const auto& b = p[static_cast<std::size_t>((k + 2) % 3)];
    const auto& m = p[static_cast<std::size_t>(k)];
    if (std::abs(dist(a, m) + dist(m, b) - dist(a, b)) <= 1e-12) return k;
  }
  return -1;
}

const CriticalPoint* find_aligned(const SolveResult& res, int intermediate) {
  for (const auto& cp : res.points) {
    if (cp.aligned && intermediate_vertex(std::get<PolygonConfig>(cp.config)) == intermediate) return &cp;
  }
  return nullptr;
}

std::vector<const CriticalPoint*> minima_of(const SolveResult& res) {
  std::vector<const CriticalPoint*> out;
  for (const auto& cp : res.points) {
    if (!cp.degenerate && cp.morse_index == 0) out.push_back(&cp);
  }
  return out;
}

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = Clock::now();
  std::ostringstream detail;
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.detail = detail.str();
  while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
  return r;
}

// Smallest height of any vertex triple, relative to the diameter.
double min_triple_height(const std::vector<Point>& p) {
  double best = std::numeric_limits<double>::infinity();
  double diam = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) diam = std::max(diam, dist(p[i], p[j]));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        const Point u = p[j] - p[i];
        const Point v = p[k] - p[i];
        const double area2 = std::abs(u.x() * v.y() - u.y() * v.x());
        const double longest = std::max({dist(p[i], p[j]), dist(p[j], p[k]), dist(p[i], p[k])});
        best = std::min(best, area2 / longest);
      }
    }
  }
  return best / diam;
}

bool strictly_convex(const std::vector<Point>& p) {
  int sign = 0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point e1 = p[(i + 1) % n] - p[i];
    const Point e2 = p[(i + 2) % n] - p[(i + 1) % n];
    const double c = e1.x() * e2.y() - e1.y() * e2.x();
    const int s = (c > 1e-12) - (c < -1e-12);
    if (s == 0 || (sign != 0 && s != sign)) return false;
    sign = s;
  }
  return true;
}

// Frobenius (Euclidean for vectors) relative error.
double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

}  // namespace

// 1 -------------------------------------------------------------------------
CriterionResult check_aligned_segment(const VerifyOptions& opt) {
  return timed(1, "aligned segment closed form and fixing effect", [&](std::ostringstream& out) {
    const auto t0 = Clock::now();
    const SolveSettings settings = base_settings(opt);
    bool ok = true;

    const ChargeVector q({4.0, 1.0, 1.0});
    const SolveResult res = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb(), settings);
    const CriticalPoint* cp = find_aligned(res, 1);
    if (!cp) {
      out << "q=(4,1,1): no aligned point with p2 intermediate";
      return false;
    }
    const auto& pc = std::get<PolygonConfig>(cp->config);
    const double d12 = dist(pc[0], pc[1]);
    const double d23 = dist(pc[1], pc[2]);
    const double longitudinal = aligned_block_spectra(pc, q, PotentialSpec::coulomb()).longitudinal(0);
    ok = ok && std::abs(d12 - 1.0 / 3.0) <= 1e-9 && std::abs(d23 - 1.0 / 6.0) <= 1e-9 && longitudinal > 0.0;
    out << "q=(4,1,1): d12=" << fmt(d12) << " d23=" << fmt(d23) << " line-restricted min (longitudinal eig "
        << fmt(longitudinal) << "), planar index " << cp->morse_index << ";";

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double q2 : {0.01, 0.1, 0.2}) {
      const ChargeVector qq({4.0, q2, 1.0});
      const SolveResult r2 = find_critical_points(PolygonSpace{3}, qq, PotentialSpec::coulomb(), settings);
      const auto mins = minima_of(r2);
      if (mins.size() != 1 || !mins.front()->aligned ||
          intermediate_vertex(std::get<PolygonConfig>(mins.front()->config)) != 1) {
        out << " q2=" << fmt(q2) << ": minimum is not the unique aligned p2-intermediate point;";
        ok = false;
        continue;
      }
      const auto& m = std::get<PolygonConfig>(mins.front()->config);
      const double d = dist(m[0], m[1]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      ok = ok && std::abs(d - 1.0 / 3.0) <= 1e-9;
    }
    const double variation = hi - lo;
    ok = ok && variation < 1e-8;
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    ok = ok && secs < 1.0;
    out << " q2 in {0.01,0.1,0.2}: d12 variation " << fmt(variation);
    return ok;
  });
}

// 2 -------------------------------------------------------------------------
CriterionResult check_triangle_taxonomy(const VerifyOptions& opt) {
  return timed(2, "triangle critical point taxonomy", [&](std::ostringstream& out) {
    const auto t0 = Clock::now();
    const SolveSettings settings = base_settings(opt);
    bool ok = true;

    {
      const ChargeVector q({1.0, 1.0, 1.0});
      const SolveResult res = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb(), settings);
      const MorseSummary s = euler_count_check(res.points, PolygonSpace{3});
      double spread = 0.0;
      for (const auto* m : minima_of(res)) {
        const auto& p = std::get<PolygonConfig>(m->config).points();
        const std::array<double, 3> l{dist(p[1], p[2]), dist(p[2], p[0]), dist(p[0], p[1])};
        std::array<double, 3> v{};
        for (int i = 0; i < 3; ++i) v[i] = l[i] * std::sqrt(q[i]);
        spread = std::max(spread, (std::max({v[0], v[1], v[2]}) - std::min({v[0], v[1], v[2]})) / v[0]);
      }
      ok = ok && res.points.size() == 5 && s.minima == 2 && s.saddles == 3 && s.degenerate == 0 &&
           s.euler == EulerStatus::passed && spread <= 1e-8;
      out << "q=(1,1,1): " << s.minima << " min / " << s.saddles << " saddle / euler " << to_string(s.euler)
          << ", side proportion spread " << fmt(spread) << ";";
    }
    {
      const ChargeVector q({0.125, 1.0, 1.0});
      const SolveResult res = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb(), settings);
      const MorseSummary s = euler_count_check(res.points, PolygonSpace{3});
      const auto mins = minima_of(res);
      double ratio_err = 1.0;
      if (mins.size() == 1 && mins.front()->aligned) {
        const auto& p = std::get<PolygonConfig>(mins.front()->config).points();
        if (intermediate_vertex(std::get<PolygonConfig>(mins.front()->config)) == 0) {
          // Outer distances in ratio sqrt(q2) : sqrt(q3).
          ratio_err = std::abs(dist(p[0], p[1]) / dist(p[0], p[2]) - std::sqrt(q[1] / q[2]));
        }
      }
      ok = ok && res.points.size() == 3 && s.minima == 1 && s.saddles == 2 && s.degenerate == 0 &&
           s.euler == EulerStatus::passed && ratio_err <= 1e-8;
      out << " q=(1/8,1,1): " << s.minima << " min / " << s.saddles << " saddle / euler " << to_string(s.euler)
          << ", aligned minimum outer ratio error " << fmt(ratio_err);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return ok && secs < 5.0;
  });
}

// 3 -------------------------------------------------------------------------
CriterionResult check_degenerate_boundary(const VerifyOptions& opt) {
  return timed(3, "degenerate aligned point on the bifurcation set", [&](std::ostringstream& out) {
    const SolveSettings settings = base_settings(opt);
    bool ok = true;
    for (double c : {1.0, 9.0, 0.25}) {
      const ChargeVector q({c / 9.0, 4.0 * c / 9.0, 4.0 * c / 9.0});
      const SolveResult res = find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb(), settings);
      const CriticalPoint* cp = find_aligned(res, 0);
      if (!cp) {
        out << "c=" << fmt(c) << ": aligned p1-intermediate point missing;";
        ok = false;
        continue;
      }
      double min_abs = std::numeric_limits<double>::infinity();
      double radius = 0.0;
      for (double v : cp->hessian_eigenvalues) {
        min_abs = std::min(min_abs, std::abs(v));
        radius = std::max(radius, std::abs(v));
      }
      const double rel = min_abs / radius;
      ok = ok && cp->degenerate && rel < 1e-8;
      out << "c=" << fmt(c) << ": degenerate=" << (cp->degenerate ? "yes" : "no") << " |min eig|/radius=" << fmt(rel)
          << "; ";
    }
    return ok;
  });
}

// 4 -------------------------------------------------------------------------
CriterionResult check_pitchfork(const VerifyOptions& opt) {
  return timed(4, "pitchfork threshold and branch exponent", [&](std::ostringstream& out) {
    const SolveSettings settings = base_settings(opt);
    const Space space = PolygonSpace{3};
    const ChargePath path{{1.0, 1.0, 1.0}, 1};
    const ThresholdResult th = detect_threshold(space, path, 0.05, 0.6);
    bool ok = std::abs(th.lambda_c - 0.25) <= 1e-4 && std::abs(th.eigenvalue) < 1e-9;
    out << "lambda_c=" << fmt(th.lambda_c) << " (" << th.tracked.name() << ", eig " << fmt(th.eigenvalue) << ");";

    const BranchDiagram diagram = trace_pitchfork(space, path, 0.2, 0.3, 101, PotentialSpec::coulomb(), settings);
    bool shape = true;
    double antisym = 0.0;
    for (std::size_t i = 0; i < diagram.samples.size(); ++i) {
      const auto& s = diagram.samples[i];
      const bool above = s.lambda > diagram.threshold.lambda_c;
      const bool at_threshold = std::abs(s.lambda - diagram.threshold.lambda_c) <= 1e-9;
      if (s.branch == 0) {
        if (!at_threshold) shape = shape && s.stability == (above ? "saddle" : "min");
        const bool has_branch = i + 1 < diagram.samples.size() && diagram.samples[i + 1].branch == 1;
        if (s.lambda > diagram.threshold.lambda_c + 2e-3) shape = shape && has_branch;
        if (!above) shape = shape && !has_branch;
      } else if (s.branch == 1) {
        shape = shape && s.stability == "min";
        const auto& mirror = diagram.samples.at(i + 1);
        antisym = std::max(antisym, std::abs(s.amplitude + mirror.amplitude));
      }
    }
    ok = ok && shape && antisym < 1e-8;
    const ExponentFit fit = fit_branch_exponent(diagram, 0.05);
    ok = ok && fit.exponent >= 0.45 && fit.exponent <= 0.55;
    out << " branch shape " << (shape ? "ok" : "wrong") << ", antisymmetry " << fmt(antisym) << ", exponent "
        << fmt(fit.exponent) << " from " << fit.samples << " samples";
    return ok;
  });
}

// 5 -------------------------------------------------------------------------
CriterionResult check_torus_equilateral(const VerifyOptions& opt) {
  return timed(5, "torus equal radii equilateral minimum", [&](std::ostringstream& out) {
    const SolveSettings settings = base_settings(opt);
    const Space space = TorusSpace{{1.0, 1.0, 1.0}};
    const ChargeVector q({1.0, 1.0, 1.0});
    const SolveResult res = find_critical_points(space, q, PotentialSpec::coulomb(), settings);
    const double third = kTwoPi / 3.0;
    for (std::size_t i = 0; i < res.points.size(); ++i) {
      const auto& cp = res.points[i];
      const auto& t = std::get<TorusConfig>(cp.config);
      if (std::abs(t.alpha1() - third) > 1e-9 || std::abs(t.alpha2() - third) > 1e-9) continue;
      const Eigen::MatrixXd h = hessian(cp.config, q, PotentialSpec::coulomb());
      const double det = h.determinant();
      const double fd_det = fd_hessian(t, q, PotentialSpec::coulomb(), default_fd_step(cp.config)).determinant();
      bool partner_ok = false;
      if (cp.symmetry_partner) {
        const auto& pt = std::get<TorusConfig>(res.points[*cp.symmetry_partner].config);
        partner_ok = std::abs(pt.alpha1() + third) <= 1e-9 && std::abs(pt.alpha2() + third) <= 1e-9;
      }
      const bool ok = std::abs(det - 25.0 / 144.0) <= 1e-9 && !cp.degenerate && cp.morse_index == 0 && partner_ok;
      out << "det=" << fmt(det) << " (finite differences " << fmt(fd_det) << "), index " << cp.morse_index
          << ", partner " << (partner_ok ? "found" : "missing");
      return ok;
    }
    out << "no critical point at (2pi/3, 2pi/3)";
    return false;
  });
}

// 6 -------------------------------------------------------------------------
CriterionResult check_torus_form_signs(const VerifyOptions&) {
  return timed(6, "torus aligned Hessian form signs", [&](std::ostringstream& out) {
    const std::array<double, 3> radii{1.0, 2.0, 3.0};
    const LinearForm form = torus_aligned_hessian_form(radii, AlignedLabel::pi_pi_0);
    const std::array<double, 3> expected{-1.0 / 64.0, -2.0 / 125.0, 3.0 / 8000.0};
    double ratio_err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double want = expected[i] / expected[2];
      ratio_err = std::max(ratio_err, std::abs(form.coeffs[i] / form.coeffs[2] - want) / std::abs(want));
    }
    bool ok = ratio_err <= 1e-12 && form.coeffs[2] > 0.0;
    out << "coefficient ratio error " << fmt(ratio_err) << ";";

    // Points on the zero segment, q3 perturbed by +-5%. The determinant comes
    // from a finite-difference Hessian (energy evaluations only).
    const auto curves = torus_bifurcation_set(radii, 12);
    const BifurcationCurve* curve = nullptr;
    for (const auto& c : curves) {
      if (c.label == label_name(AlignedLabel::pi_pi_0)) curve = &c;
    }
    if (!curve) {
      out << " zero segment missing";
      return false;
    }
    const TorusConfig aligned = aligned_config(radii, AlignedLabel::pi_pi_0);
    const double step = default_fd_step(aligned);
    int agree = 0;
    int flips = 0;
    for (std::size_t m = 1; m + 1 < curve->samples.size(); ++m) {
      const auto& p = curve->samples[m].q;
      std::array<int, 2> signs{};
      for (int side = 0; side < 2; ++side) {
        const double f = side == 0 ? 1.05 : 0.95;
        const ChargeVector q({p[0], p[1], p[2] * f});
        const double h = form(q.values());
        const double det = fd_hessian(aligned, q, PotentialSpec::coulomb(), step).determinant();
        signs[side] = (det > 0.0) - (det < 0.0);
        if (signs[side] == ((h > 0.0) - (h < 0.0)) && signs[side] != 0) ++agree;
      }
      if (signs[0] == -signs[1] && signs[0] != 0) ++flips;
    }
    ok = ok && agree == 20 && flips == 10;
    out << " straddling points with matching sign " << agree << "/20, flips " << flips << "/10";
    return ok;
  });
}

// 7 -------------------------------------------------------------------------
CriterionResult check_torus_morse_count(const VerifyOptions& opt) {
  return timed(7, "torus Morse counting over random charges", [&](std::ostringstream& out) {
    const auto t0 = Clock::now();
    SolveSettings settings = base_settings(opt);
    settings.grid_density = 96;
    const Space space = TorusSpace{{1.0, 2.0, 3.0}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_q(-5.0, 5.0);
    bool ok = true;
    int exact = 0;
    int paired = 0;
    for (int trial = 0; trial < 25; ++trial) {
      const ChargeVector q({std::exp(log_q(rng)), std::exp(log_q(rng)), std::exp(log_q(rng))});
      const SolveResult res = find_critical_points(space, q, PotentialSpec::coulomb(), settings);
      const MorseSummary s = euler_count_check(res.points, space);
      bool aligned_min = false;
      for (const auto& cp : res.points) aligned_min = aligned_min || (cp.aligned && !cp.degenerate && cp.morse_index == 0);
      bool trial_ok = s.euler == EulerStatus::passed;
      if (aligned_min) {
        trial_ok = trial_ok && res.points.size() == 4;
        exact += trial_ok;
      } else {
        const auto mins = minima_of(res);
        const bool pair = mins.size() == 2 && !mins[0]->aligned && mins[0]->symmetry_partner &&
                          &res.points[*mins[0]->symmetry_partner] == mins[1];
        trial_ok = trial_ok && res.points.size() >= 5 && pair;
        paired += trial_ok;
      }
      if (!trial_ok) {
        out << "trial " << trial << " failed (" << res.points.size() << " points, euler " << to_string(s.euler)
            << "); ";
      }
      ok = ok && trial_ok;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out << exact << " trials with an aligned minimum and 4 points, " << paired << " with a symmetric minima pair";
    return ok && secs < 60.0;
  });
}

// 8 -------------------------------------------------------------------------
CriterionResult check_quadrilateral(const VerifyOptions& opt) {
  return timed(8, "quadrilateral aligned index and convex configurations", [&](std::ostringstream& out) {
    const double delta = 1e-3;
    const ChargeVector q({1.0, delta, delta, 1.0});
    SolveSettings settings = base_settings(opt);
    // Line-restricted minimum with p1 and p4 at the ends, polished on M(4).
    const std::vector<Point> guess{Point(0, 0), Point(1.0 / 6.0, 0), Point(1.0 / 3.0, 0), Point(0.5, 0)};
    const auto polished = polish(PolygonConfig::from_points(guess), q, PotentialSpec::coulomb(), settings);
    if (!polished || alignment_defect(*polished) != 0.0) {
      out << "aligned critical point not found";
      return false;
    }
    const auto& aligned = std::get<PolygonConfig>(*polished);
    const AlignedBlocks blocks = aligned_block_spectra(aligned, q, PotentialSpec::coulomb());
    auto negatives = [](const Eigen::VectorXd& v) { return (v.array() < 0.0).count(); };
    const auto index_1d = negatives(blocks.longitudinal);
    const auto index_full = negatives(blocks.full);
    bool ok = index_1d == 0 && blocks.transverse(0) > 0.0 && index_full == index_1d;
    out << "delta=1e-3: 1-D index " << index_1d << ", transverse min eig " << fmt(blocks.transverse(0))
        << ", full index " << index_full << ";";

    // Random positive charges and random convex seeds; keep the polished
    // critical points that are convex and not aligned.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> charge(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int collected = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 2000 && collected < 20; ++trial) {
      const ChargeVector qq({charge(rng), charge(rng), charge(rng), charge(rng)});
      std::array<double, 4> angle{};
      for (double& a : angle) a = kTwoPi * unit(rng);
      std::sort(angle.begin(), angle.end());
      std::vector<Point> seed;
      for (double a : angle) {
        const double rad = 0.8 + 0.4 * unit(rng);
        seed.emplace_back(rad * std::cos(a), rad * std::sin(a));
      }
      const auto found = polish(PolygonConfig::from_points(seed), qq, PotentialSpec::coulomb(), settings);
      if (!found || alignment_defect(*found) == 0.0) continue;
      const auto& pts = std::get<PolygonConfig>(*found).points();
      if (!strictly_convex(pts)) continue;
      worst = std::min(worst, min_triple_height(pts));
      ++collected;
    }
    ok = ok && collected == 20 && worst > 1e-6;
    out << " convex configurations checked " << collected << ", smallest triple height/diameter " << fmt(worst);
    return ok;
  });
}

// 9 -------------------------------------------------------------------------
CriterionResult check_derivative_oracles(const VerifyOptions&) {
  return timed(9, "analytic derivatives against finite differences", [&](std::ostringstream& out) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::array<PotentialSpec, 3> specs{PotentialSpec::coulomb(), PotentialSpec::power_law(2.0),
                                             PotentialSpec::logarithmic()};
    bool ok = true;
    for (const auto& spec : specs) {
      double poly_g = 0.0, poly_h = 0.0, torus_g = 0.0, torus_h = 0.0;
      for (int trial = 0; trial < 100;) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < n; ++i) pts.emplace_back(unit(rng), unit(rng));
        std::vector<double> charges;
        for (std::size_t i = 0; i < n; ++i) charges.push_back(0.2 + 1.8 * unit(rng));
        const PolygonConfig c = PolygonConfig::from_points(pts);
        if (c.min_pair_distance() < 0.05 * c.diameter()) continue;
        ++trial;
        const ChargeVector q(charges);
        const double h = default_fd_step(c);
        const PolygonDerivatives der = polygon_derivatives(c.points(), q, spec);
        poly_g = std::max(poly_g, rel_err(der.gradient, fd_full_gradient(c.points(), q, spec, h)));
        poly_h = std::max(poly_h, rel_err(der.hessian, fd_full_hessian(c.points(), q, spec, h)));
        // Chart derivatives of E composed with the rescaling retraction.
        const Eigen::MatrixXd z = tangent_basis(c.points());
        const double dil = dilation_derivative(c, q, spec);
        const Eigen::MatrixXd chart_h = z.transpose() * (der.hessian - dil * der.perimeter_hessian) * z;
        poly_g = std::max(poly_g, rel_err(z.transpose() * der.gradient, fd_gradient(c, q, spec, h)));
        poly_h = std::max(poly_h, rel_err(chart_h, fd_hessian(c, q, spec, h)));
      }
      for (int trial = 0; trial < 100;) {
        std::array<double, 3> radii{0.5 + 2.5 * unit(rng), 0.5 + 2.5 * unit(rng), 0.5 + 2.5 * unit(rng)};
        const TorusConfig t(radii, kTwoPi * unit(rng), kTwoPi * unit(rng));
        const auto d = t.distances();
        if (std::min({d[0], d[1], d[2]}) < 0.05 * t.min_radius()) continue;
        ++trial;
        const ChargeVector q({0.2 + 1.8 * unit(rng), 0.2 + 1.8 * unit(rng), 0.2 + 1.8 * unit(rng)});
        const double h = default_fd_step(t);
        const EnergyReport rep = evaluate(t, q, spec);
        torus_g = std::max(torus_g, rel_err(rep.gradient, fd_gradient(t, q, spec, h)));
        torus_h = std::max(torus_h, rel_err(rep.hessian, fd_hessian(t, q, spec, h)));
      }
      const bool spec_ok = poly_g < 1e-6 && torus_g < 1e-6 && poly_h < 1e-4 && torus_h < 1e-4;
      ok = ok && spec_ok;
      out << spec.name() << ": polygon grad " << fmt(poly_g) << " hess " << fmt(poly_h) << ", torus grad "
          << fmt(torus_g) << " hess " << fmt(torus_h) << "; ";
    }
    return ok;
  });
}

// 10 ------------------------------------------------------------------------
CriterionResult check_inverse_roundtrip(const VerifyOptions&) {
  return timed(10, "inverse problem roundtrip", [&](std::ostringstream& out) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    bool ok = true;
    while (done < 100) {
      const ChargeVector raw({unit(rng), unit(rng), unit(rng)});
      const ChargeVector q(raw.normalized());
      if (classify_polygon_region(q.values(), 0.0).region != PolygonRegion::two_minima) continue;
      const auto tri = critical_triangle(q);
      if (!tri) continue;
      ++done;
      const auto& p = tri->points();
      const InverseResult inv = stabilizing_charges_triangle(dist(p[1], p[2]), dist(p[2], p[0]), dist(p[0], p[1]));
      if (inv.kind != InverseKind::unique_ray || !inv.charges) {
        ok = false;
        continue;
      }
      for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs((*inv.charges)[i] - q[i]));
    }
    ok = ok && worst <= 1e-8;
    out << "max normalized charge error " << fmt(worst) << " over " << done << " samples";
    return ok;
  });
}

// 11 ------------------------------------------------------------------------
CriterionResult check_region_scan(const VerifyOptions& opt) {
  return timed(11, "control triangle grid scan", [&](std::ostringstream& out) {
    SolveSettings settings = base_settings(opt);
    settings.grid_density = 12;
    const auto cells = scan_polygon_regions(50, settings, 2);
    std::size_t mismatched = 0;
    std::size_t banded = 0;
    for (const auto& c : cells) {
      if (c.near_boundary) {
        ++banded;
        continue;
      }
      if (c.minima != c.expected) ++mismatched;
    }
    out << cells.size() << " nodes, " << banded << " within the boundary band, " << mismatched << " mismatched";
    return mismatched == 0;
  });
}

// 12 ------------------------------------------------------------------------
CriterionResult check_torus_regions(const VerifyOptions&) {
  return timed(12, "torus vertex regions", [&](std::ostringstream& out) {
    const std::array<double, 3> radii{1.0, 2.0, 3.0};
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    int wrong = 0;
    for (AlignedLabel label : kAlignedLabels) {
      const LinearForm form = torus_aligned_hessian_form(radii, label);
      const TorusConfig c = aligned_config(radii, label);
      for (int i = 0; i < 200; ++i) {
        const ChargeVector q({std::exp(6.0 * unit(rng) - 3.0), std::exp(6.0 * unit(rng) - 3.0),
                              std::exp(6.0 * unit(rng) - 3.0)});
        const double h = form(q.values());
        const CriticalPoint cp = describe_point(c, q, PotentialSpec::coulomb());
        if (cp.degenerate) continue;
        ++checked;
        const bool minimum = cp.morse_index == 0;
        const bool maximum = cp.morse_index == 2;
        if (label == AlignedLabel::zero_zero_zero) {
          wrong += !maximum;
        } else if ((h > 0.0) != minimum || (!minimum && cp.morse_index != 1)) {
          ++wrong;
        }
      }
    }
    out << checked << " aligned points classified, " << wrong << " disagree with the form sign";
    return wrong == 0;
  });
}

std::vector<CriterionResult> run_suite(const VerifyOptions& opt) {
  std::vector<CriterionResult> out{check_aligned_segment(opt),         check_triangle_taxonomy(opt),
                                   check_degenerate_boundary(opt),   check_pitchfork(opt),
                                   check_torus_equilateral(opt),     check_torus_form_signs(opt),
                                   check_torus_morse_count(opt),     check_quadrilateral(opt),
                                   check_derivative_oracles(opt),    check_inverse_roundtrip(opt)};
  if (opt.full) {
    out.push_back(check_region_scan(opt));
    out.push_back(check_torus_regions(opt));
  }
  return out;
}

nlohmann::json report_json(const std::vector<CriterionResult>& results, bool full) {
  nlohmann::json list = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return {{"suite", full ? "full" : "quick"}, {"passed", all}, {"criteria", list}};
}

}  // namespace ceq
