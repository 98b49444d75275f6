#pragma once

#include <vector>

#include "lpalex/geometry.hpp"

namespace lpalex {

/// Accuracy controls for the per-cone entropy integrals.
struct QuadratureSpec {
  int degree = 16;          ///< Gauss-Legendre points per panel, >= 4.
  int max_subdivision = 12; ///< Bisection depth limit per panel.
  double rel_tol = 1e-9;    ///< >= 1e-12.

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Absolute tolerance floor applied together with rel_tol.
inline constexpr double kEntropyAbsFloor = 1e-10;

struct BallConstants {
  int n = 0;
  double omega_n = 0.0;           ///< volume of the unit n-ball
  double surface = 0.0;           ///< n omega_n, the measure of S^{n-1}
  std::vector<double> omega;      ///< omega[k] for k = 0..n
};

/// Volume of the unit k-ball, pi^{k/2} / Gamma(k/2 + 1), any k >= 0.
double unit_ball_volume(int k);

/// Throws DimensionUnsupported for n not in {2, 3}.
BallConstants ball_constants(int n);

/// E(K) = -integral over S^{n-1} of log h_K(v) dv.
///
/// Evaluated cone by cone: on the normal cone of x_j = rho_j u_j the support
/// function is x_j . v, so each piece is a smooth integral. Throws
/// QuadratureNotConverged when a panel hits max_subdivision.
double entropy(const SymmetricPolytope& poly, const QuadratureSpec& quad = {});

/// dE / d(log rho_i) with both antipodes moved together: -2 J_i for vertex
/// atoms, 0 for absorbed atoms (a one-sided derivative on the boundary).
std::vector<double> entropy_gradient(const SymmetricPolytope& poly);

/// Integral of log(u . v) over the spherical polygon `cone` (counter-
/// clockwise as seen from outside) for a unit u with u . v > 0 on the cone.
/// Exposed for the lower-dimensional limit body in the theory module.
double log_dot_integral_3d(const Vec3& u, const std::vector<Vec3>& cone,
                           const QuadratureSpec& quad);
/// Same, with the great circle of edge k given by its inward unit normal
/// arcs[k] (see SymmetricPolytope::arc_normals).
double log_dot_integral_3d(const Vec3& u, const std::vector<Vec3>& cone, const std::vector<Vec3>& arcs,
                           const QuadratureSpec& quad);

/// Integral of log cos(psi) for psi in [lo, hi], a subset of (-pi/2, pi/2).
double log_cos_integral(double lo, double hi, const QuadratureSpec& quad);

}  // namespace lpalex
