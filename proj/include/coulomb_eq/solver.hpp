#pragma once

// Critical points of the energy: closed forms for three charges, multistart
// Newton on the Lagrange / stationarity system for the general case.

#include "coulomb_eq/config.hpp"
#include "coulomb_eq/potentials.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ceq {

struct PolygonSpace {
  int n = 3;
};

struct TorusSpace {
  std::array<double, 3> radii{1.0, 2.0, 3.0};
};

using Space = std::variant<PolygonSpace, TorusSpace>;

/// Parses "polygon:<n>" or "torus:<r1>,<r2>,<r3>".
Space parse_space(std::string_view text);
std::string space_name(const Space& space);
std::size_t charge_count(const Space& space);

struct SolveSettings {
  int grid_density = 24;
  double newton_tol = 1e-11;
  int max_iters = 100;
  double dedup_tol = 1e-7;
  double pole_radius = kPoleRadius;
  /// Above this many grid nodes the polygon seeds switch to a Halton sample of this size.
  std::size_t max_seeds = 20000;
  /// 0 = hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

/// Relative eigenvalue threshold for degeneracy.
inline constexpr double kDegeneracyTol = 1e-8;

struct CriticalPoint {
  Configuration config;
  double energy = 0.0;
  double grad_norm = 0.0;
  /// Residual of the Lagrange relations (polygon) or the sine proportion (torus).
  double stationarity_residual = 0.0;
  std::vector<double> hessian_eigenvalues;  // ascending
  int morse_index = 0;                      // negative eigenvalue count
  bool degenerate = false;
  bool aligned = false;
  SymmetryKey key;
  std::optional<std::size_t> symmetry_partner;  // index into the owning list
};

/// Converged iff grad_norm <= newton_tol * max(1, max|q|^2); energy is
/// homogeneous of degree 2 in the charges.
double gradient_tolerance(const SolveSettings& settings, const ChargeVector& q);

/// Energy, spectrum and classification at a configuration (no polishing).
CriticalPoint describe_point(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec);

/// Aligned critical segments of a perimeter-1 triangle: entry k
/// has vertex k between the other two on a segment of length 1/2, with the
/// outer distances in ratio sqrt(q_i) : sqrt(q_j).
std::array<PolygonConfig, 3> solve_line_three(const ChargeVector& q);
/// Index of the intermediate vertex of the global 1-D minimum (smallest charge).
std::size_t line_minimum_index(const ChargeVector& q);

/// Triangle with sides (d23 : d31 : d12) = (1/sqrt q1 : 1/sqrt q2 : 1/sqrt q3)
/// when those satisfy the strict triangle inequality; p3 above the x axis.
std::optional<PolygonConfig> critical_triangle(const ChargeVector& q);

/// Polygon n = 3: the three aligned segments. Torus: the four configurations
/// with all central angles in {0, pi} (poles skipped for coincident radii).
std::vector<Configuration> enumerate_aligned(const Space& space, const ChargeVector& q);

/// Newton with Levenberg damping from one seed. nullopt if it does not converge.
std::optional<Configuration> polish(const Configuration& seed, const ChargeVector& q, const PotentialSpec& spec,
                                    const SolveSettings& settings);

struct SolveResult {
  std::vector<CriticalPoint> points;  // sorted by (energy, key)
  std::size_t seeds = 0;
  std::size_t converged = 0;
  std::string coverage_note;
};

SolveResult find_critical_points(const Space& space, const ChargeVector& q, const PotentialSpec& spec,
                                 const SolveSettings& settings = {});

/// Seeds used by find_critical_points (grid or Halton sample plus injected closed forms).
std::vector<Configuration> make_seeds(const Space& space, const ChargeVector& q, const SolveSettings& settings);

}  // namespace ceq
