#include "coulomb_eq/bifurcation.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace ceq {

ControlPoint ControlPoint::from_charges(std::span<const double> charges) {
  if (charges.size() != 3) throw std::invalid_argument("control points have three charges");
  const double s = charges[0] + charges[1] + charges[2];
  ControlPoint p;
  for (int i = 0; i < 3; ++i) {
    if (!(charges[i] > 0.0)) throw std::invalid_argument("control points need positive charges");
    p.q[i] = charges[i] / s;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Polygon bifurcation set

double polygon_curve_residual(const ControlPoint& p, int i) {
  const int j = (i + 1) % 3;
  const int k = (i + 2) % 3;
  return 1.0 / std::sqrt(p.q[i]) - 1.0 / std::sqrt(p.q[j]) - 1.0 / std::sqrt(p.q[k]);
}

std::vector<BifurcationCurve> polygon_bifurcation_set(int resolution) {
  if (resolution < 16) throw std::invalid_argument("bifurcation set resolution must be at least 16");
  std::vector<BifurcationCurve> curves;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    BifurcationCurve curve;
    curve.label = "1/sqrt(q" + std::to_string(i + 1) + ") = 1/sqrt(q" + std::to_string(j + 1) + ") + 1/sqrt(q" +
                  std::to_string(k + 1) + ")";
    for (int m = 0; m < resolution; ++m) {
      // t = q_j / (q_j + q_k); with c = 1/sqrt(t) + 1/sqrt(1-t) the equality
      // forces q_j + q_k = c^2 / (1 + c^2).
      const double t = (m + 0.5) / resolution;
      const double c = 1.0 / std::sqrt(t) + 1.0 / std::sqrt(1.0 - t);
      const double s = c * c / (1.0 + c * c);
      ControlPoint p;
      p.q[i] = 1.0 / (1.0 + c * c);
      p.q[j] = s * t;
      p.q[k] = s * (1.0 - t);
      curve.samples.push_back(p);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

RegionInfo classify_polygon_region(std::span<const double> q, double tol) {
  if (q.size() != 3) throw std::invalid_argument("three charges required");
  std::array<double, 3> s{};
  for (int i = 0; i < 3; ++i) {
    if (!(q[i] > 0.0)) throw std::invalid_argument("charges must be positive");
    s[i] = 1.0 / std::sqrt(q[i]);
  }
  for (int i = 0; i < 3; ++i) {
    const double excess = s[i] - s[(i + 1) % 3] - s[(i + 2) % 3];
    if (std::abs(excess) <= tol * s[i]) return {PolygonRegion::boundary, i};
    if (excess > 0.0) return {PolygonRegion::aligned_minimum, i};
  }
  return {PolygonRegion::two_minima, -1};
}

// ---------------------------------------------------------------------------
// Torus bifurcation set

std::vector<BifurcationCurve> torus_bifurcation_set(const std::array<double, 3>& radii, int resolution) {
  if (resolution < 2) throw std::invalid_argument("torus curve resolution must be at least 2");
  std::vector<BifurcationCurve> curves;
  for (AlignedLabel label : kAlignedLabels) {
    const LinearForm form = torus_aligned_hessian_form(radii, label);
    const auto sg = form.signs();
    const int positives = (sg[0] > 0) + (sg[1] > 0) + (sg[2] > 0);
    if (positives == 3) continue;  // never vanishes on the triangle
    if (positives != 1 || sg[0] == 0 || sg[1] == 0 || sg[2] == 0) {
      throw BifurcationError("unexpected sign pattern of the aligned Hessian form at " + label_name(label));
    }
    const int p = sg[0] > 0 ? 0 : (sg[1] > 0 ? 1 : 2);
    // Zero of the form on the edge joining vertex p with vertex other.
    auto edge_point = [&](int other) {
      ControlPoint e;
      const double cp = form.coeffs[p];
      const double co = form.coeffs[other];
      e.q[p] = -co / (cp - co);
      e.q[other] = 1.0 - e.q[p];
      return e;
    };
    const ControlPoint a = edge_point((p + 1) % 3);
    const ControlPoint b = edge_point((p + 2) % 3);
    BifurcationCurve curve;
    curve.label = label_name(label);
    for (int m = 0; m < resolution; ++m) {
      const double t = static_cast<double>(m) / (resolution - 1);
      ControlPoint s;
      for (int i = 0; i < 3; ++i) s.q[i] = (1.0 - t) * a.q[i] + t * b.q[i];
      curve.samples.push_back(s);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

bool segments_intersect(const ControlPoint& a0, const ControlPoint& a1, const ControlPoint& b0,
                        const ControlPoint& b1) {
  auto orient = [](const ControlPoint& p, const ControlPoint& q, const ControlPoint& r) {
    const double v = (q.q[0] - p.q[0]) * (r.q[1] - p.q[1]) - (q.q[1] - p.q[1]) * (r.q[0] - p.q[0]);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const ControlPoint& p, const ControlPoint& q, const ControlPoint& r) {
    return std::min(p.q[0], r.q[0]) <= q.q[0] && q.q[0] <= std::max(p.q[0], r.q[0]) &&
           std::min(p.q[1], r.q[1]) <= q.q[1] && q.q[1] <= std::max(p.q[1], r.q[1]);
  };
  const int o1 = orient(a0, a1, b0);
  const int o2 = orient(a0, a1, b1);
  const int o3 = orient(b0, b1, a0);
  const int o4 = orient(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, b0, a1)) return true;
  if (o2 == 0 && on_segment(a0, b1, a1)) return true;
  if (o3 == 0 && on_segment(b0, a0, b1)) return true;
  if (o4 == 0 && on_segment(b0, a1, b1)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Paths and tracked configurations

ChargeVector ChargePath::at(double lambda) const {
  std::vector<double> q = base;
  q.at(index) = lambda;
  return ChargeVector(std::move(q));
}

std::tuple<ChargePath, double, double> ChargePath::parse(std::string_view text, std::vector<double> base) {
  auto fail = [&] { return std::invalid_argument("path must look like q<k>:<from>:<to>, got '" + std::string(text) + "'"); };
  if (!text.starts_with("q")) throw fail();
  std::array<double, 3> parts{};
  std::string_view rest = text.substr(1);
  for (int i = 0; i < 3; ++i) {
    const auto colon = rest.find(':');
    if ((i < 2) == (colon == std::string_view::npos)) throw fail();
    const std::string_view item = rest.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), parts[i]);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw fail();
    if (i < 2) rest.remove_prefix(colon + 1);
  }
  const double k = parts[0];
  if (k != std::floor(k) || k < 1 || k > static_cast<double>(base.size())) throw fail();
  if (parts[1] == parts[2]) throw std::invalid_argument("path range is empty");
  ChargePath path{std::move(base), static_cast<std::size_t>(k) - 1};
  return {std::move(path), parts[1], parts[2]};
}

std::string TrackedAligned::name() const {
  if (torus_label) return label_name(*torus_label);
  return "p" + std::to_string(polygon_intermediate + 1) + " intermediate";
}

Configuration tracked_config(const Space& space, const TrackedAligned& tracked, const ChargeVector& q) {
  if (const auto* torus = std::get_if<TorusSpace>(&space)) {
    return aligned_config(torus->radii, tracked.torus_label.value());
  }
  if (std::get<PolygonSpace>(space).n != 3) throw BifurcationError("pitchfork tracking supports triangles only");
  return solve_line_three(q)[static_cast<std::size_t>(tracked.polygon_intermediate)];
}

double transverse_eigenvalue(const Space& space, const TrackedAligned& tracked, const ChargeVector& q,
                             const PotentialSpec& spec) {
  const Configuration c = tracked_config(space, tracked, q);
  if (const auto* poly = std::get_if<PolygonConfig>(&c)) {
    return aligned_block_spectra(*poly, q, spec).transverse(0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian(c, q, spec), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

namespace {

std::vector<TrackedAligned> candidates(const Space& space) {
  std::vector<TrackedAligned> out;
  if (std::holds_alternative<TorusSpace>(space)) {
    for (AlignedLabel l : {AlignedLabel::pi_pi_0, AlignedLabel::zero_pi_pi, AlignedLabel::pi_zero_pi}) {
      out.push_back({-1, l});
    }
  } else {
    if (std::get<PolygonSpace>(space).n != 3) throw BifurcationError("pitchfork tracking supports triangles only");
    for (int k = 0; k < 3; ++k) out.push_back({k, std::nullopt});
  }
  return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ThresholdResult detect_threshold(const Space& space, const ChargePath& path, double lo, double hi,
                                 const PotentialSpec& spec, int probes) {
  if (probes < 2) throw std::invalid_argument("at least two probes are needed");
  struct Crossing {
    TrackedAligned tracked;
    double a;
    double b;
  };
  std::vector<Crossing> crossings;
  for (const auto& cand : candidates(space)) {
    double prev_lambda = lo;
    int prev_sign = sign_of(transverse_eigenvalue(space, cand, path.at(lo), spec));
    for (int i = 1; i < probes; ++i) {
      const double lambda = lo + (hi - lo) * i / (probes - 1);
      const int s = sign_of(transverse_eigenvalue(space, cand, path.at(lambda), spec));
      if (s != prev_sign) crossings.push_back({cand, prev_lambda, lambda});
      prev_sign = s;
      prev_lambda = lambda;
    }
  }
  if (crossings.size() != 1) {
    throw BifurcationError("path crosses the bifurcation set " + std::to_string(crossings.size()) +
                           " times; exactly one transversal crossing is required");
  }
  const Crossing& c = crossings.front();
  auto f = [&](double lambda) { return transverse_eigenvalue(space, c.tracked, path.at(lambda), spec); };
  double a = c.a;
  double b = c.b;
  double fa = f(a);
  double mid = 0.5 * (a + b);
  double fm = f(mid);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    fm = f(mid);
    if (fm == 0.0 || std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return {mid, fm, c.tracked};
}

// ---------------------------------------------------------------------------
// Branch tracing

double transverse_amplitude(const Configuration& config, const TrackedAligned& tracked) {
  if (const auto* t = std::get_if<TorusConfig>(&config)) {
    return reduce_angle(t->alpha3() - label_angles(tracked.torus_label.value())[2]);
  }
  const auto& pts = std::get<PolygonConfig>(config).points();
  const auto k = static_cast<std::size_t>(tracked.polygon_intermediate);
  const Point& a = pts[(k + 1) % 3];
  const Point& b = pts[(k + 2) % 3];
  const Point ab = b - a;
  const Point ak = pts[k] - a;
  return (ab.x() * ak.y() - ab.y() * ak.x()) / ab.norm();
}

namespace {

std::string stability_of(const CriticalPoint& cp, int top_index) {
  if (cp.degenerate) return "degenerate";
  if (cp.morse_index == 0) return "min";
  if (cp.morse_index == top_index) return "max";
  return "saddle";
}

std::optional<Configuration> polish_off_axis(const Configuration& seed, const ChargeVector& q,
                                             const PotentialSpec& spec, const SolveSettings& settings) {
  auto r = polish(seed, q, spec, settings);
  if (r && alignment_defect(*r) > 0.0) return r;
  return std::nullopt;
}

// Unstable direction seeds around the aligned configuration, largest offset first.
std::vector<Configuration> split_seeds(const Configuration& aligned, const ChargeVector& q, const PotentialSpec& spec,
                                       const TrackedAligned& tracked) {
  std::vector<Configuration> out;
  const std::array<double, 6> offsets{0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
  if (const auto* t = std::get_if<TorusConfig>(&aligned)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian(aligned, q, spec));
    const Eigen::VectorXd dir = eig.eigenvectors().col(0);
    for (double eps : offsets) out.emplace_back(TorusConfig(t->radii(), t->alpha1() + eps * dir(0), t->alpha2() + eps * dir(1)));
    return out;
  }
  const auto& base = std::get<PolygonConfig>(aligned);
  const auto k = static_cast<std::size_t>(tracked.polygon_intermediate);
  for (double eps : offsets) {
    std::vector<Point> pts = base.points();
    pts[k].y() += eps;
    try {
      out.emplace_back(PolygonConfig::from_points(pts));
    } catch (const ConfigError&) {
    }
  }
  return out;
}

}  // namespace

BranchDiagram trace_pitchfork(const Space& space, const ChargePath& path, double lo, double hi, int steps,
                              const PotentialSpec& spec, const SolveSettings& settings) {
  if (steps < 2) throw std::invalid_argument("a branch trace needs at least two steps");
  BranchDiagram diagram;
  diagram.threshold = detect_threshold(space, path, lo, hi, spec);
  const TrackedAligned& tracked = diagram.threshold.tracked;
  const int top_index = std::holds_alternative<TorusSpace>(space) ? 2 : 2 * (std::get<PolygonSpace>(space).n - 2);

  std::optional<Configuration> branch;  // the +amplitude member of the mirror pair
  double branch_lambda = lo;
  for (int i = 0; i < steps; ++i) {
    const double lambda = lo + (hi - lo) * i / (steps - 1);
    const ChargeVector q = path.at(lambda);
    const std::vector<double> qn = q.normalized();
    const std::array<double, 3> control{qn[0], qn[1], qn[2]};

    const Configuration aligned = tracked_config(space, tracked, q);
    const CriticalPoint acp = describe_point(aligned, q, spec);
    diagram.samples.push_back({lambda, control, 0, 0.0, acp.energy, stability_of(acp, top_index)});

    // Continue the off-axis branch from the previous parameter, halving the
    // step on failure down to 1e-6.
    if (branch) {
      std::optional<Configuration> current = branch;
      double at = branch_lambda;
      double h = lambda - at;
      while (at != lambda) {
        const double next = std::abs(lambda - at) <= std::abs(h) ? lambda : at + h;
        if (auto r = polish_off_axis(*current, path.at(next), spec, settings)) {
          current = r;
          at = next;
          h = lambda - at;
        } else {
          h *= 0.5;
          if (std::abs(h) < 1e-6) {
            current.reset();
            break;
          }
        }
      }
      branch = current;
    }
    if (!branch && acp.hessian_eigenvalues.front() < 0.0 && transverse_eigenvalue(space, tracked, q, spec) < 0.0) {
      for (const auto& seed : split_seeds(aligned, q, spec, tracked)) {
        if (auto r = polish_off_axis(seed, q, spec, settings)) {
          branch = r;
          break;
        }
      }
    }
    if (!branch) continue;
    if (transverse_amplitude(*branch, tracked) < 0.0) branch = apply_involution(*branch);
    branch_lambda = lambda;
    const Configuration mirror = apply_involution(*branch);
    for (const auto& [member, sign] : {std::pair{*branch, 1}, std::pair{mirror, -1}}) {
      const CriticalPoint cp = describe_point(member, q, spec);
      diagram.samples.push_back(
          {lambda, control, sign, transverse_amplitude(member, tracked), cp.energy, stability_of(cp, top_index)});
    }
  }
  return diagram;
}

ExponentFit fit_branch_exponent(const BranchDiagram& diagram, double window) {
  const double lc = diagram.threshold.lambda_c;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& s : diagram.samples) {
    if (s.branch != 1) continue;
    const double dl = std::abs(s.lambda - lc);
    if (!(dl > 0.0) || dl > window || s.amplitude == 0.0) continue;
    const double x = std::log(dl);
    const double y = std::log(std::abs(s.amplitude));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw BifurcationError("too few branch samples inside the fit window");
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nn;
  return {slope, std::exp(intercept), n};
}

// ---------------------------------------------------------------------------
// Fixing effect

FixingProbe fixing_effect_probe(double q1, double q3, std::span<const double> q2_samples, const PotentialSpec& spec,
                                const SolveSettings& settings) {
  if (!(q1 > 0.0) || !(q3 > 0.0)) throw std::invalid_argument("outer charges must be positive");
  FixingProbe probe;
  const double inv = 1.0 / std::sqrt(q1) + 1.0 / std::sqrt(q3);
  probe.threshold = 1.0 / (inv * inv);
  probe.expected_ratio = std::sqrt(q1 / q3);
  for (double q2 : q2_samples) {
    FixingEntry e;
    e.q2 = q2;
    const ChargeVector q({q1, q2, q3});
    const SolveResult res = find_critical_points(PolygonSpace{3}, q, spec, settings);
    std::vector<const CriticalPoint*> minima;
    for (const auto& cp : res.points) {
      if (!cp.degenerate && cp.morse_index == 0) minima.push_back(&cp);
    }
    if (minima.empty()) {
      e.note = "no nondegenerate minimum found";
      probe.entries.push_back(e);
      continue;
    }
    const auto& pts = std::get<PolygonConfig>(minima.front()->config).points();
    e.minimum_alignment_defect = alignment_defect(minima.front()->config);
    e.d12 = (pts[0] - pts[1]).norm();
    e.d23 = (pts[1] - pts[2]).norm();
    e.ratio = e.d12 / e.d23;
    if (q2 > probe.threshold) {
      e.note = "above threshold: the minimum leaves the line";
    } else if (minima.size() != 1 || e.minimum_alignment_defect != 0.0) {
      e.note = "unexpected minimum structure below threshold";
    } else {
      e.included = true;
    }
    probe.entries.push_back(e);
  }
  return probe;
}

// ---------------------------------------------------------------------------
// Region scan

std::vector<RegionCell> scan_polygon_regions(int n, const SolveSettings& settings, int band) {
  if (n < 2) throw std::invalid_argument("grid too small");
  std::map<std::pair<int, int>, PolygonRegion> region;
  std::vector<std::pair<int, int>> nodes;
  auto point_of = [n](int i, int j) {
    ControlPoint p;
    p.q[0] = (i + 1.0 / 3.0) / n;
    p.q[1] = (j + 1.0 / 3.0) / n;
    p.q[2] = 1.0 - p.q[0] - p.q[1];
    return p;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      nodes.emplace_back(i, j);
      region[{i, j}] = classify_polygon_region(point_of(i, j).q, 1e-12).region;
    }
  }
  std::vector<RegionCell> cells;
  for (const auto& [i, j] : nodes) {
    RegionCell cell;
    cell.point = point_of(i, j);
    const PolygonRegion mine = region[{i, j}];
    cell.expected = mine == PolygonRegion::two_minima ? 2 : 1;
    for (int di = -band; di <= band && !cell.near_boundary; ++di) {
      for (int dj = -band; dj <= band; ++dj) {
        auto it = region.find({i + di, j + dj});
        if (it != region.end() && it->second != mine) {
          cell.near_boundary = true;
          break;
        }
      }
    }
    const ChargeVector q({cell.point.q[0], cell.point.q[1], cell.point.q[2]});
    for (const auto& cp : find_critical_points(PolygonSpace{3}, q, PotentialSpec::coulomb(), settings).points) {
      if (!cp.degenerate && cp.morse_index == 0) ++cell.minima;
    }
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace ceq
