#pragma once

// Inverse problem: charges that make a given configuration critical.

#include "coulomb_eq/solver.hpp"

#include <array>
#include <optional>
#include <string>

namespace ceq {

enum class InverseKind { unique_ray, one_parameter_family, infeasible };
std::string to_string(InverseKind kind);

/// Aligned triangle family: outer charges fixed on a ray, intermediate charge
/// free. Values are in the scale of the representative.
struct AlignedFamily {
  int intermediate = 1;          // vertex lying between the other two
  std::array<int, 2> outer{0, 2};
  std::array<double, 2> outer_charges{};
  double minimality_bound = 0.0;  // q_mid <= bound: minimum (degenerate at equality), above: saddle
};

struct InverseResult {
  InverseKind kind = InverseKind::infeasible;
  std::optional<ChargeVector> charges;  // representative, sums to 1
  std::optional<AlignedFamily> family;
  bool positive_octant = false;         // torus aligned: every positive q works
  std::optional<Configuration> config;  // the configuration that was inverted
  std::string note;
};

/// Sides l1 = |p2p3|, l2 = |p3p1|, l3 = |p1p2| (any positive scale).
/// Strict triangle: q_i proportional to 1/l_i^2. Degenerate sides are routed to
/// the aligned case; sides violating the triangle inequality are infeasible.
InverseResult stabilizing_charges_triangle(double l1, double l2, double l3);

/// Aligned perimeter-1 triangle p1 - p2 - p3 with |p1p2| = d_left and
/// |p2p3| = d_right. Throws std::domain_error unless d_left + d_right = 1/2.
InverseResult stabilizing_charges_aligned(double d_left, double d_right);

/// Torus configuration: q_i proportional to phi'(d_i) r_j r_k sin(alpha_i) / d_i.
/// Aligned configurations are critical for every charge vector.
InverseResult stabilizing_charges_torus(const TorusConfig& config, const PotentialSpec& spec = {});

struct EquilibriumReport {
  double grad_norm = 0.0;              // chart gradient / max(1, max|q|^2)
  double stationarity_residual = 0.0;  // Lagrange or sine relation residual
  bool passed = false;                 // both below 1e-9
};

/// Throws PoleError at a pole.
EquilibriumReport verify_equilibrium(const Configuration& config, const ChargeVector& q,
                                     const PotentialSpec& spec = {});

}  // namespace ceq
