#pragma once

// Control-triangle analysis: bifurcation sets in the simplex of normalized
// charges, threshold detection, pitchfork branch tracing and fixing-effect probes.

#include "coulomb_eq/morse.hpp"
#include "coulomb_eq/solver.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceq {

class BifurcationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Barycentric point of the control triangle (positive, sums to 1).
struct ControlPoint {
  std::array<double, 3> q{};

  static ControlPoint from_charges(std::span<const double> charges);
};

struct BifurcationCurve {
  std::string label;
  std::vector<ControlPoint> samples;
};

/// 1/sqrt(q_i) - 1/sqrt(q_j) - 1/sqrt(q_k) for the curve of vertex i.
double polygon_curve_residual(const ControlPoint& p, int i);

/// Three curves 1/sqrt(q_i) = 1/sqrt(q_j) + 1/sqrt(q_k), sampled by sweeping
/// the ratio q_j : q_k over `resolution` cell centres. Requires resolution >= 16.
std::vector<BifurcationCurve> polygon_bifurcation_set(int resolution);

enum class PolygonRegion { two_minima, aligned_minimum, boundary };

struct RegionInfo {
  PolygonRegion region = PolygonRegion::two_minima;
  int intermediate = -1;  // vertex of the aligned minimum, if any
};

/// Which side of the bifurcation set a charge triple lies on; `boundary`
/// within a relative tolerance of one of the equalities.
RegionInfo classify_polygon_region(std::span<const double> q, double tol = 1e-12);

/// Zero segments of the three sign-changing aligned Hessian forms inside the
/// control triangle, labelled by aligned configuration. The (0,0,0) form is
/// positive on the whole triangle and contributes no curve.
std::vector<BifurcationCurve> torus_bifurcation_set(const std::array<double, 3>& radii, int resolution);

/// True if the closed segments [a0, a1] and [b0, b1] (in barycentric
/// coordinates) intersect.
bool segments_intersect(const ControlPoint& a0, const ControlPoint& a1, const ControlPoint& b0,
                        const ControlPoint& b1);

/// One charge varied, the others fixed.
struct ChargePath {
  std::vector<double> base;
  std::size_t index = 1;

  ChargeVector at(double lambda) const;
  /// "q<k>:<from>:<to>" with 1-based k; returns the path and the range.
  static std::tuple<ChargePath, double, double> parse(std::string_view text, std::vector<double> base);
};

/// Aligned configuration tracked through a pitchfork: polygon vertex k
/// intermediate, or a torus aligned label.
struct TrackedAligned {
  int polygon_intermediate = -1;
  std::optional<AlignedLabel> torus_label;

  std::string name() const;
};

Configuration tracked_config(const Space& space, const TrackedAligned& tracked, const ChargeVector& q);

/// Smallest transverse eigenvalue of the tracked aligned configuration.
/// Polygon: transverse (off-line) block; torus: smallest chart eigenvalue.
double transverse_eigenvalue(const Space& space, const TrackedAligned& tracked, const ChargeVector& q,
                             const PotentialSpec& spec);

struct ThresholdResult {
  double lambda_c = 0.0;
  double eigenvalue = 0.0;
  TrackedAligned tracked;
};

/// Bisection on the transverse eigenvalue of the single aligned configuration
/// whose eigenvalue changes sign along the path. Throws BifurcationError unless
/// exactly one sign change is seen over `probes` samples of [lo, hi].
ThresholdResult detect_threshold(const Space& space, const ChargePath& path, double lo, double hi,
                                 const PotentialSpec& spec = {}, int probes = 64);

struct BranchSample {
  double lambda = 0.0;
  std::array<double, 3> control{};  // normalized charges
  int branch = 0;                   // 0 aligned, +1 / -1 mirror pair
  double amplitude = 0.0;           // signed transverse coordinate
  double energy = 0.0;
  std::string stability;            // min, saddle, max or degenerate
};

struct BranchDiagram {
  ThresholdResult threshold;
  std::vector<BranchSample> samples;
};

/// Signed transverse coordinate: polygon, signed distance of the intermediate
/// vertex from the line through the outer two; torus, reduced alpha3 minus its
/// aligned value.
double transverse_amplitude(const Configuration& config, const TrackedAligned& tracked);

BranchDiagram trace_pitchfork(const Space& space, const ChargePath& path, double lo, double hi, int steps,
                              const PotentialSpec& spec = {}, const SolveSettings& settings = {});

struct ExponentFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of |amplitude| = C |lambda - lambda_c|^b over the
/// off-axis samples with 0 < |lambda - lambda_c| <= window.
ExponentFit fit_branch_exponent(const BranchDiagram& diagram, double window);

struct FixingEntry {
  double q2 = 0.0;
  bool included = false;
  double d12 = 0.0;
  double d23 = 0.0;
  double ratio = 0.0;
  double minimum_alignment_defect = 0.0;
  std::string note;
};

struct FixingProbe {
  double threshold = 0.0;       // 1 / (1/sqrt q1 + 1/sqrt q3)^2
  double expected_ratio = 0.0;  // sqrt(q1 / q3)
  std::vector<FixingEntry> entries;
};

/// For each intermediate charge below threshold, locates the energy minimum
/// of the triangle (q1, q2, q3) and reports the position of p2 on the segment.
/// Samples above threshold are excluded with a note and the off-line distance
/// of the minimum.
FixingProbe fixing_effect_probe(double q1, double q3, std::span<const double> q2_samples,
                                const PotentialSpec& spec = {}, const SolveSettings& settings = {});

struct RegionCell {
  ControlPoint point;
  std::size_t minima = 0;
  std::size_t expected = 0;
  bool near_boundary = false;
};

/// Solves every interior node of an N x N barycentric grid of the triangle
/// and compares the number of minima with the closed-form region.
std::vector<RegionCell> scan_polygon_regions(int n, const SolveSettings& settings, int band = 2);

}  // namespace ceq
