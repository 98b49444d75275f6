#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpalex/curvature.hpp"
#include "lpalex/entropy.hpp"
#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"

namespace lpalex {

/// Phi(Q) = E(Q) / (n omega_n) - (1/p) log(2 sum_i rho_Q(u_i)^{-p} mu_i).
struct Objective {
  DiscreteEvenMeasure measure;
  double p = -0.5;
  QuadratureSpec quad;

  /// Throws DegenerateInput if the measure is not spanning, InvalidP if p == 0
  /// or non-finite.
  void validate() const;
};

struct SolveOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8;
  int multistarts = 8;
  std::uint64_t seed = 0;
  double escape_t = 0.1;   ///< first lift height for collapsed radii, in (0, 0.5]
  unsigned threads = 1;
  /// Lets maximize_phi run for p outside (-1, 0).
  bool allow_any_p = false;

  void validate() const;
};

/// Radii below this fraction of the largest radius count as collapsed.
inline constexpr double kCollapseRatio = 1e-6;

enum class SolveStatus { converged, max_iters, degenerate_input };

const char* to_string(SolveStatus status);

/// Final state of one multistart run.
struct StartResult {
  std::size_t start = 0;
  RadialConfig radii;
  double phi = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int escapes = 0;
  SolveStatus status = SolveStatus::max_iters;
};

struct SolveReport {
  RadialConfig radii;            ///< normalized so max rho_i = 1
  double scale = 1.0;            ///< c with mu = J_p(cK, .)
  double phi = 0.0;
  std::vector<double> phi_trace; ///< accepted iterates of the best run
  double grad_norm = 0.0;        ///< infinity norm at the returned radii
  std::vector<double> residuals; ///< |c^p Jp_i - mu_i| / mu_i
  double max_residual = 0.0;
  SolveStatus status = SolveStatus::max_iters;
  std::size_t best_start = 0;
  int iterations = 0;
  int escapes = 0;
  /// Every run, in start order.
  std::vector<StartResult> runs;
  /// Distinct local optima (Phi values more than 1e-8 apart), best first.
  std::vector<StartResult> optima;
};

/// Builds the polytope, canonicalizes radii and evaluates Phi.
double phi(const Objective& objective, const RadialConfig& config);

/// dPhi / d(log rho_i) = -2 J_i / (n omega_n) + rho_i^{-p} mu_i / sum_j rho_j^{-p} mu_j.
std::vector<double> phi_gradient(const Objective& objective, const RadialConfig& config);

/// Multistart ascent of Phi in log-radii. Throws DegenerateInput for a
/// non-spanning measure.
SolveReport maximize_phi(const Objective& objective, const SolveOptions& opts);

/// Single ascent run from `initial` (used by maximize_phi for every start).
StartResult ascend_from(const Objective& objective, const SolveOptions& opts,
                        const RadialConfig& initial, std::vector<double>* trace = nullptr);

/// c = (|mu| / |J_p(K, .)|)^{1/p}. Throws EmptyCurvature when |J_p| == 0.
double recover_scale(const SymmetricPolytope& poly, const DiscreteEvenMeasure& measure, double p);

struct VerifyReport {
  std::vector<double> J;
  std::vector<double> Jp;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool pass = false;
  double total_curvature = 0.0;  ///< 2 sum J_i
  double sphere_measure = 0.0;   ///< n omega_n
};

/// residual_i = |c^p Jp_i - mu_i| / mu_i; pass iff the max is <= tol.
VerifyReport verify(const SymmetricPolytope& poly, double c, const DiscreteEvenMeasure& measure,
                    double p, double tol);

}  // namespace lpalex
