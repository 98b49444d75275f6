#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lpalex/vec.hpp"

namespace lpalex {

/// One antipodal pair ±u carrying mass `weight` on each of the two points.
struct Atom {
  Vec3 u;
  double weight = 0.0;
};

/// Directions closer than this (or closer to antipodal) are the same atom.
inline constexpr double kMergeTolerance = 1e-10;
/// Singular-value threshold for the rank of a direction set.
inline constexpr double kRankTolerance = 1e-10;

/// Rank of a set of directions (0..3).
int direction_rank(std::span<const Vec3> dirs);

/// Even discrete measure sum_i mu_i (delta_{u_i} + delta_{-u_i}) on S^{n-1}.
///
/// One representative is stored per antipodal pair. Construction goes
/// through `create`, which normalizes directions and merges repeated or
/// antipodal atoms by summing their weights.
class DiscreteEvenMeasure {
 public:
  DiscreteEvenMeasure() = default;

  /// Throws DimensionUnsupported for n not in {2,3} and ValidationError for
  /// non-positive weights, zero directions, or planar atoms with z != 0.
  /// A human-readable line is appended to `notes` for every merge.
  static DiscreteEvenMeasure create(int n, std::vector<Atom> atoms,
                                    std::vector<std::string>* notes = nullptr);

  int dim() const { return n_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::vector<Vec3> directions() const;
  std::vector<double> weights() const;

  /// True iff the support is not contained in a great subsphere.
  bool spanning() const { return spanning_; }

  /// |mu| over the full symmetric support, i.e. 2 * sum_i mu_i.
  double total_mass() const;

  DiscreteEvenMeasure scaled(double factor) const;

 private:
  int n_ = 0;
  std::vector<Atom> atoms_;
  bool spanning_ = false;
};

}  // namespace lpalex
