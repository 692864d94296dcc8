#pragma once

// Pair kernels, total energy and its analytic derivatives, plus the
// finite-difference oracles used to check them.

#include "coulomb_eq/config.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ceq {

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PotentialSpec {
  enum class Kind { coulomb, power_law, logarithmic };

  Kind kind = Kind::coulomb;
  double exponent = 1.0;  // power_law only, > 1

  static PotentialSpec coulomb() { return {}; }
  static PotentialSpec power_law(double k);
  static PotentialSpec logarithmic() { return {Kind::logarithmic, 0.0}; }

  /// Accepts "coulomb", "power:<k>" or "log".
  static PotentialSpec parse(std::string_view text);
  std::string name() const;
};

struct KernelValues {
  double value;
  double first;
  double second;
};

/// phi(d), phi'(d), phi''(d). Throws std::domain_error for d <= 0.
KernelValues kernel_eval(const PotentialSpec& spec, double d);

/// Energy plus chart derivatives. Polygon chart: 2(n-2) tangent coordinates
/// (perimeter constraint and rotation gauge removed); torus chart: (alpha1, alpha2).
struct EnergyReport {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  bool pole_flag = false;
};

/// Derivatives in the full coordinates (x2, y2, ..., xn, yn); p1 is pinned.
struct PolygonDerivatives {
  double energy = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  double perimeter = 0.0;
  Eigen::VectorXd perimeter_gradient;
  Eigen::MatrixXd perimeter_hessian;
};

PolygonDerivatives polygon_derivatives(std::span<const Point> points, const ChargeVector& q,
                                       const PotentialSpec& spec);

/// Lagrange data at a polygon: multiplier of the perimeter constraint (least
/// squares), an orthonormal basis of tangent ∩ rotation-complement, and the
/// projected gradient / Lagrangian Hessian in that basis.
struct ConstrainedSystem {
  double multiplier = 0.0;
  Eigen::MatrixXd tangent_basis;
  Eigen::VectorXd reduced_gradient;
  Eigen::MatrixXd reduced_hessian;
  Eigen::VectorXd lagrange_residual;  // grad E - multiplier * grad perimeter
};

/// Generator of rotations about p1 in full coordinates.
Eigen::VectorXd rotation_generator(std::span<const Point> points);
/// Orthonormal basis of the complement of {grad perimeter, rotation generator}.
Eigen::MatrixXd tangent_basis(std::span<const Point> points);
ConstrainedSystem constrained_system(const PolygonDerivatives& der, std::span<const Point> points);

double energy(std::span<const Point> points, const ChargeVector& q, const PotentialSpec& spec);
double energy(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec);
double energy(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec);
double energy(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec);

/// Value with pole flag; inside the pole radius value is +inf and no derivatives are filled.
EnergyReport evaluate(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec);
EnergyReport evaluate(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec);
EnergyReport evaluate(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec);

/// Chart gradient / Hessian. Throw PoleError at a pole.
Eigen::VectorXd gradient(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec);
Eigen::MatrixXd hessian(const Configuration& config, const ChargeVector& q, const PotentialSpec& spec);

/// Polygon: 1e-5 * diameter. Torus: 1e-4 * min_i d_i / sqrt(r_j r_k), the
/// angular scale of the closest pair.
double default_fd_step(const Configuration& config);

// Finite-difference oracles. Only energy evaluations are used.
// Torus: central differences in (alpha1, alpha2).
Eigen::VectorXd fd_gradient(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                            double step);
Eigen::MatrixXd fd_hessian(const TorusConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                           double step);
// Polygon, full coordinates of p2..pn (perimeter not enforced).
Eigen::VectorXd fd_full_gradient(std::span<const Point> points, const ChargeVector& q,
                                 const PotentialSpec& spec, double step);
Eigen::MatrixXd fd_full_hessian(std::span<const Point> points, const ChargeVector& q,
                                const PotentialSpec& spec, double step);
// Polygon chart: differences along the tangent basis followed by the rescaling
// retraction onto perimeter 1. The Hessian matches the reduced Lagrangian
// Hessian only at critical points.
Eigen::VectorXd fd_gradient(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                            double step);
Eigen::MatrixXd fd_hessian(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec,
                           double step);

/// d/dt E((1 + t) P) at t = 0.
double dilation_derivative(const PolygonConfig& config, const ChargeVector& q, const PotentialSpec& spec);

}  // namespace ceq
