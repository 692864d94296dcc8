#pragma once

// Morse classification of critical points and topological consistency counts.

#include "coulomb_eq/solver.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceq {

class MorseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of negative eigenvalues of the constrained Hessian.
/// Throws MorseError for a degenerate point.
int morse_index(const CriticalPoint& cp);

/// The four aligned torus configurations, named by (alpha1, alpha2, alpha3).
enum class AlignedLabel { pi_pi_0, zero_pi_pi, pi_zero_pi, zero_zero_zero };

inline constexpr std::array<AlignedLabel, 4> kAlignedLabels{AlignedLabel::pi_pi_0, AlignedLabel::zero_pi_pi,
                                                            AlignedLabel::pi_zero_pi, AlignedLabel::zero_zero_zero};

std::array<double, 3> label_angles(AlignedLabel label);
std::string label_name(AlignedLabel label);
TorusConfig aligned_config(const std::array<double, 3>& radii, AlignedLabel label);

/// H(q) = c1 q1 + c2 q2 + c3 q3.
struct LinearForm {
  std::array<double, 3> coeffs{};

  double operator()(std::span<const double> q) const { return coeffs[0] * q[0] + coeffs[1] * q[1] + coeffs[2] * q[2]; }
  std::array<int, 3> signs() const;
};

/// Sign form of the Hessian determinant at an aligned torus configuration:
///   H = r1/(d2^3 d3^3) q1 cos a2 cos a3 + r2/(d3^3 d1^3) q2 cos a3 cos a1
///     + r3/(d1^3 d2^3) q3 cos a1 cos a2,
/// a positive multiple (q1 q2 q3 r1 r2 r3) of the Coulomb Hessian determinant.
/// Throws MorseError when two radii coincide.
LinearForm torus_aligned_hessian_form(const std::array<double, 3>& radii, AlignedLabel label);

enum class EulerStatus { passed, failed, not_applicable };
std::string to_string(EulerStatus status);

struct MorseSummary {
  std::map<int, std::size_t> counts;  // Morse index -> count (non-degenerate points)
  std::size_t minima = 0;
  std::size_t saddles = 0;
  std::size_t maxima = 0;
  std::size_t degenerate = 0;
  std::size_t poles_count = 0;
  int euler_sum = 0;
  int euler_expected = 0;
  EulerStatus euler = EulerStatus::not_applicable;
  bool exactness = false;
  std::string reason;
};

/// Polygon n = 3: sum over points of (-1)^index plus the three poles (counted
/// as maxima) must be 2. Torus: alternating count must be 0, exact when there
/// are exactly four critical points. Other spaces: not applicable.
MorseSummary euler_count_check(std::span<const CriticalPoint> points, const Space& space);

/// Spectra of the Lagrangian Hessian of a polygon lying on the x axis, split
/// into the along-line block and the transverse block.
struct AlignedBlocks {
  Eigen::VectorXd longitudinal;  // ascending
  Eigen::VectorXd transverse;    // ascending
  Eigen::VectorXd full;          // ascending, whole chart
};

AlignedBlocks aligned_block_spectra(const PolygonConfig& aligned, const ChargeVector& q, const PotentialSpec& spec);

}  // namespace ceq
