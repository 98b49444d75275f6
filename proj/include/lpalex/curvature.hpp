#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"

namespace lpalex {

/// Per-atom Aleksandrov integral curvature J(K, {u_i}) and its L_p
/// counterpart. Values are per stored atom; the antipodal atom carries the
/// same value, so totals over the full support are twice the sums.
struct CurvatureResult {
  std::vector<double> J;
  std::vector<double> Jp;
  /// 2 * sum J_i; equals the sphere measure n omega_n.
  double total_J = 0.0;
  /// 2 * sum Jp_i.
  double total_Jp = 0.0;
  double p = 0.0;
  /// False when p lies outside (-1, 0), where no existence result applies.
  bool p_in_range = true;
};

/// Spherical measure of each vertex's normal cone (0 for absorbed atoms).
std::vector<double> integral_curvature(const SymmetricPolytope& poly);

/// Jp_i = rho_i^p J_i. Throws InvalidP for p == 0 or non-finite p.
CurvatureResult lp_curvature(const SymmetricPolytope& poly, double p);

struct MonteCarloCurvature {
  std::vector<double> J;
  std::vector<double> std_error;
  std::size_t samples = 0;
};

/// Estimates J_i by assigning uniform directions to the vertex attaining
/// h_K. Deterministic in (samples, seed) for any thread count.
/// Throws InvalidArgument when samples < 10^4.
MonteCarloCurvature mc_curvature_oracle(const SymmetricPolytope& poly, std::size_t samples,
                                        std::uint64_t seed, unsigned threads = 1);

/// True iff the atom directions have rank n.
bool spanning_check(const DiscreteEvenMeasure& measure);

}  // namespace lpalex
