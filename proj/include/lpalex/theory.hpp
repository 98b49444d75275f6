#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lpalex/entropy.hpp"
#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"

namespace lpalex {

/// A configuration collapsed onto a proper subspace S.
///
/// Atoms [0, split) span S (dimension k < n) and carry radii in [1, R];
/// the remaining atoms lie outside S. The unit ball of S must sit inside
/// K^0 = conv{±rho_i u_i : i < split}.
struct SubspaceScenario {
  DiscreteEvenMeasure measure;
  std::size_t split = 0;
  std::vector<double> radii;
  double R = 1.0;
  double p = -0.5;

  int k = 0;
  Eigen::MatrixXd basis;       ///< n x k orthonormal basis of S
  Eigen::MatrixXd complement;  ///< n x (n-k) orthonormal basis of S-perp

  int dim() const { return measure.dim(); }
};

/// Validates and fills the derived fields. Throws ValidationError.
SubspaceScenario make_scenario(DiscreteEvenMeasure measure, std::size_t split,
                               std::vector<double> radii, double R, double p);

/// Rescales `radii` so that the inradius of K^0 within S is exactly 1 and
/// sets R to the largest canonical radius.
SubspaceScenario normalized_scenario(DiscreteEvenMeasure measure, std::size_t split,
                                     std::vector<double> radii, double p);

/// Inradius of conv{±rho_i u_i : i < split} inside S.
double inradius_in_subspace(const SubspaceScenario& sc);

/// Polar angle phi in [0, pi/2] of v = (v_S cos phi, v_perp sin phi).
double polar_angle(const SubspaceScenario& sc, const Vec3& v);

struct LowerBound {
  double c_f = 0.0;     ///< lower bound of f near S-perp, in (0, 1)
  double delta0 = 0.0;  ///< angular width of that neighbourhood, in (0, pi/2)
  double f_min_perp = 0.0;
};

/// f(v) = max_{i >= split} |v . u_i|. c_f is half the grid minimum of f on
/// S-perp; delta0 is the largest width with grid-min f >= c_f on
/// {phi > pi/2 - delta0}. Throws SpanningViolated when f vanishes on S-perp.
LowerBound lower_bound_constants(const SubspaceScenario& sc, int grid = 720);

/// t in (0, 1) with arccos(c_f t / R) > pi/2 - delta0.
bool admissible(const SubspaceScenario& sc, const LowerBound& lb, double t);

/// K^t = conv{±rho_i u_i (i < split), ±t u_j (j >= split)}. Throws InadmissibleT.
SymmetricPolytope build_perturbation(const SubspaceScenario& sc, const LowerBound& lb, double t);

/// Support function of K^t straight from its generating points; t = 0 gives
/// the degenerate limit K^0 inside S.
double perturbed_support(const SubspaceScenario& sc, double t, const Vec3& v);

enum class RegionBounds {
  standard,
  swapped,  ///< Omega_1/Omega_2 thresholds exchanged; harness self-test only
};

struct PartitionVerdict {
  bool ok = true;
  std::size_t samples = 0;
  std::array<std::size_t, 3> region_counts{};
  std::size_t violations = 0;
  double worst_excess = 0.0;
};

/// Samples uniform directions and checks the three-region support bounds
/// for K^t against K^0 with 1e-12 slack.
PartitionVerdict partition_check(const SubspaceScenario& sc, const LowerBound& lb, double t,
                                 std::size_t samples, std::uint64_t seed,
                                 RegionBounds bounds = RegionBounds::standard);

struct Gains {
  double g1 = 0.0;
  double g2 = 0.0;
  double G = 0.0;
  double kappa = 0.0;  ///< k omega_k (n-k) omega_{n-k} / (n omega_n)
  double a = 0.0;
  double b = 0.0;
};

/// Lower-bound gain functions for the entropy and normalization terms.
/// Throws InadmissibleT.
Gains gain_functions(const SubspaceScenario& sc, const LowerBound& lb, double t);

/// E(K^0) from the slice decomposition h_{K^0}(v) = cos(phi) h_{K^0}(v_S).
double limit_entropy(const SubspaceScenario& sc, const QuadratureSpec& quad);

/// Phi(K^0) with only atoms [0, split) in the normalization term.
double limit_phi(const SubspaceScenario& sc, const QuadratureSpec& quad);

struct TheoryCheckOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int grid = 720;
  QuadratureSpec quad{16, 40, 1e-12};
};

struct GridPoint {
  double t = 0.0;
  bool admissible = false;
  std::string note;
  double phi_t = 0.0;
  double lhs = 0.0;           ///< Phi(K^t) - Phi(K^0)
  double delta1 = 0.0;        ///< (E(K^t) - E(K^0)) / (n omega_n)
  Gains gains;
  bool lhs_ok = false;        ///< lhs >= G - 1e-9
  bool g1_ok = false;         ///< n omega_n delta1 >= k omega_k (n-k) omega_{n-k} g1
  PartitionVerdict partition;
};

struct TheoryCheckReport {
  LowerBound constants;
  double p = 0.0;
  double phi_limit = 0.0;
  double entropy_limit = 0.0;
  std::vector<GridPoint> points;

  bool partition_ok = false;
  bool lhs_bound_ok = false;
  bool g1_consistent = false;
  bool G_positive_somewhere = false;
  bool G_increasing_near_zero = false;
  std::vector<std::string> notes;

  bool all_ok() const {
    return partition_ok && lhs_bound_ok && g1_consistent && G_positive_somewhere &&
           G_increasing_near_zero;
  }
};

/// Decades 1e-12 .. 1e-1.
std::vector<double> default_t_grid();

/// Evaluates every admissible grid point; inadmissible points are skipped
/// with a note. Failures are recorded in the verdicts, never thrown.
TheoryCheckReport degeneracy_gain_check(const SubspaceScenario& sc, std::vector<double> t_grid,
                                        const TheoryCheckOptions& opts = {});

}  // namespace lpalex
