#include "coulomb_eq/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ceq {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

json to_json(const Configuration& config) {
  if (const auto* p = std::get_if<PolygonConfig>(&config)) {
    json pts = json::array();
    for (const auto& pt : p->points()) pts.push_back({pt.x(), pt.y()});
    return {{"space", "polygon"}, {"points", pts}};
  }
  const auto& t = std::get<TorusConfig>(config);
  const auto a = t.angles();
  return {{"space", "torus"}, {"radii", t.radii()}, {"angles", a}};
}

Configuration config_from_json(const json& j) {
  const std::string space = j.at("space").get<std::string>();
  if (space == "polygon") {
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("polygon points must be [x, y] pairs");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return PolygonConfig::from_points(pts);
  }
  if (space == "torus") {
    const auto radii = j.at("radii").get<std::vector<double>>();
    const auto angles = j.at("angles").get<std::vector<double>>();
    if (radii.size() != 3) throw std::invalid_argument("torus needs three radii");
    if (angles.size() != 2 && angles.size() != 3) throw std::invalid_argument("torus needs two or three angles");
    if (angles.size() == 3 && std::abs(reduce_angle(angles[0] + angles[1] + angles[2])) > 1e-9) {
      throw std::invalid_argument("torus angles must sum to a multiple of 2 pi");
    }
    for (double r : radii) {
      if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
    }
    return TorusConfig({radii[0], radii[1], radii[2]}, angles[0], angles[1]);
  }
  throw std::invalid_argument("unknown space '" + space + "'");
}

json to_json(const SolveSettings& s) {
  return {{"grid_density", s.grid_density}, {"newton_tol", s.newton_tol}, {"max_iters", s.max_iters},
          {"dedup_tol", s.dedup_tol},       {"pole_radius", s.pole_radius}, {"max_seeds", s.max_seeds}};
}

json to_json(const CriticalPoint& cp) {
  json coords;
  if (const auto* p = std::get_if<PolygonConfig>(&cp.config)) {
    coords = json::array();
    for (const auto& pt : p->points()) coords.push_back({pt.x(), pt.y()});
  } else {
    coords = std::get<TorusConfig>(cp.config).angles();
  }
  json j = {{"coords", coords},
            {"energy", cp.energy},
            {"grad_norm", cp.grad_norm},
            {"stationarity_residual", cp.stationarity_residual},
            {"eigenvalues", cp.hessian_eigenvalues},
            {"index", nullptr},
            {"aligned", cp.aligned},
            {"degenerate", cp.degenerate},
            {"partner", nullptr},
            {"key", cp.key.to_string()}};
  if (!cp.degenerate) j["index"] = cp.morse_index;
  if (cp.symmetry_partner) j["partner"] = *cp.symmetry_partner;
  return j;
}

json to_json(const MorseSummary& s) {
  json counts = json::object();
  for (const auto& [index, n] : s.counts) counts[std::to_string(index)] = n;
  return {{"minima", s.minima},
          {"saddles", s.saddles},
          {"maxima", s.maxima},
          {"degenerate", s.degenerate},
          {"index_counts", counts},
          {"poles_counted", s.poles_count},
          {"euler_sum", s.euler_sum},
          {"euler_expected", s.euler_expected},
          {"euler", to_string(s.euler)},
          {"exact", s.exactness},
          {"reason", s.reason}};
}

json to_json(const InverseResult& r) {
  json j = {{"kind", to_string(r.kind)}, {"charges", nullptr}, {"family", nullptr}, {"note", r.note}};
  if (r.charges) j["charges"] = std::vector<double>(r.charges->values().begin(), r.charges->values().end());
  if (r.family) {
    const auto& f = *r.family;
    j["family"] = {{"intermediate", f.intermediate + 1},
                   {"outer", {f.outer[0] + 1, f.outer[1] + 1}},
                   {"outer_charges", f.outer_charges},
                   {"minimality_bound", f.minimality_bound}};
  } else if (r.positive_octant) {
    j["family"] = {{"positive_octant", true}};
  }
  if (r.config) j["config"] = to_json(*r.config);
  return j;
}

json to_json(const ThresholdResult& t) {
  return {{"lambda_c", t.lambda_c}, {"eigenvalue", t.eigenvalue}, {"tracked", t.tracked.name()}};
}

json solve_document(const Space& space, const ChargeVector& q, const PotentialSpec& spec, const SolveResult& result,
                    const MorseSummary& summary) {
  json pts = json::array();
  for (const auto& cp : result.points) pts.push_back(to_json(cp));
  json doc = {{"space", space_name(space)},
              {"charges", std::vector<double>(q.values().begin(), q.values().end())},
              {"potential", spec.name()},
              {"points", pts},
              {"summary", to_json(summary)},
              {"seeds", result.seeds},
              {"converged", result.converged}};
  if (!result.coverage_note.empty()) doc["coverage_note"] = result.coverage_note;
  return doc;
}

std::string branch_csv(const BranchDiagram& diagram) {
  std::ostringstream out;
  out << "lambda,q1,q2,q3,branch,amplitude,energy,stability\n";
  for (const auto& s : diagram.samples) {
    out << format_double(s.lambda) << ',' << format_double(s.control[0]) << ',' << format_double(s.control[1]) << ','
        << format_double(s.control[2]) << ',' << s.branch << ',' << format_double(s.amplitude) << ','
        << format_double(s.energy) << ',' << s.stability << '\n';
  }
  return out.str();
}

std::string curves_csv(const std::vector<BifurcationCurve>& curves) {
  std::ostringstream out;
  out << "curve,label,q1,q2,q3\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (const auto& p : curves[c].samples) {
      out << c << ",\"" << curves[c].label << "\"," << format_double(p.q[0]) << ',' << format_double(p.q[1]) << ','
          << format_double(p.q[2]) << '\n';
    }
  }
  return out.str();
}

RunManifest RunManifest::make(std::string command, json arguments) {
  RunManifest m;
  m.command = std::move(command);
  m.arguments = std::move(arguments);
  m.input_hash = hex64(fnv1a(m.command + '\n' + m.arguments.dump()));
  return m;
}

json RunManifest::to_json() const {
  return {{"tool", kToolName}, {"version", version}, {"command", command}, {"arguments", arguments},
          {"input_hash", input_hash}};
}

}  // namespace ceq
