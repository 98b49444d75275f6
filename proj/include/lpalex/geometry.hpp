#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpalex/measure.hpp"
#include "lpalex/vec.hpp"

namespace lpalex {

/// Vertex radii rho_i > 0 along the measure's rays, parallel to its atoms.
struct RadialConfig {
  std::vector<double> radii;

  std::size_t size() const { return radii.size(); }
  RadialConfig scaled(double lambda) const;
};

/// Half-space {x : normal . x <= offset}.
struct Facet {
  Vec3 normal;
  double offset = 0.0;
};

enum class AtomStatus { vertex, absorbed };

/// An atom is a vertex iff its point is a corner of the exact hull lying on
/// at least n merged facets; boundary ties are absorbed.

/// Adjacent hull faces whose unit normals are closer than this, scaled by
/// offset / max vertex norm when that ratio is below 1, are merged.
inline constexpr double kCoplanarTolerance = 1e-9;

/// conv{±rho_i u_i} with its H-representation and normal fan.
///
/// Immutable after construction. The stored config is canonical: every
/// rho_i equals the radial function of the hull in direction u_i.
class SymmetricPolytope {
 public:
  int dim() const { return n_; }
  std::size_t size() const { return dirs_.size(); }

  const std::vector<Vec3>& directions() const { return dirs_; }
  const RadialConfig& config() const { return config_; }
  double radius(std::size_t i) const { return config_.radii[i]; }
  Vec3 point(std::size_t i) const { return config_.radii[i] * dirs_[i]; }

  /// Both members of each antipodal facet pair are listed.
  const std::vector<Facet>& facets() const { return facets_; }
  AtomStatus status(std::size_t i) const { return status_[i]; }
  bool is_vertex(std::size_t i) const { return status_[i] == AtomStatus::vertex; }
  std::size_t vertex_count() const;

  /// Facets incident to the vertex +rho_i u_i, counter-clockwise around it
  /// (for n = 2: the two edges, so the cone sweeps counter-clockwise from the
  /// first normal to the second). Empty when absorbed.
  const std::vector<std::size_t>& incident(std::size_t i) const { return incident_[i]; }
  /// n = 3 only: for each k, the unit vector (x_i - x_j) / |x_i - x_j| along
  /// the hull edge shared by incident facets k and k + 1 (cyclically). It is
  /// the normal of the great circle carrying that cone edge, pointing into
  /// the cone, and stays accurate when the two facet normals are nearly
  /// antipodal.
  const std::vector<Vec3>& arc_normals(std::size_t i) const { return arcs_[i]; }

  /// h_K(v) = max over vertex atoms of rho_i |u_i . v|.
  double support(const Vec3& v) const;
  /// rho_K(u) = min over facets with a_f . u > 0 of b_f / (a_f . u).
  double radial(const Vec3& u) const;
  /// h of the polar body conv{±a_f / b_f}; equals 1 / radial(u).
  double polar_support(const Vec3& u) const;

 private:
  friend SymmetricPolytope build_polytope(int, std::span<const Vec3>, const RadialConfig&);

  int n_ = 0;
  std::vector<Vec3> dirs_;
  RadialConfig config_;
  std::vector<Facet> facets_;
  std::vector<AtomStatus> status_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<Vec3>> arcs_;
};

/// Hull of {±rho_i u_i}. Throws DimensionUnsupported, InvalidArgument for
/// mismatched sizes or non-positive radii, and DegenerateHull when the
/// points do not span R^n.
SymmetricPolytope build_polytope(int n, std::span<const Vec3> dirs, const RadialConfig& config);
SymmetricPolytope build_polytope(const DiscreteEvenMeasure& measure, const RadialConfig& config);

/// Normal cone of the vertex +rho_i u_i intersected with the sphere.
struct NormalCone {
  std::size_t atom = 0;
  /// Facet normals bounding the cone, counter-clockwise; empty if absorbed.
  std::vector<Vec3> boundary;
  /// n = 3: inward normal of the great circle from boundary[k] to boundary[k+1].
  std::vector<Vec3> arcs;
  /// Spherical measure: radians for n = 2, steradians for n = 3.
  double area = 0.0;
};

/// One cone per stored atom; the cone at -rho_i u_i is the negation.
std::vector<NormalCone> normal_fan(const SymmetricPolytope& poly);

}  // namespace lpalex
