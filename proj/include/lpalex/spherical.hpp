#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpalex/vec.hpp"

namespace lpalex::spherical {

/// Angular distance between unit vectors, accurate for tiny and near-pi angles.
double angle_between(const Vec3& a, const Vec3& b);

/// Drops cyclically consecutive vertices closer than `tol` radians.
std::vector<Vec3> merge_close_vertices(std::span<const Vec3> poly, double tol = 1e-14);

/// Area of a simple spherical polygon listed counter-clockwise as seen from
/// outside the sphere: sum of interior angles minus (m - 2) pi. Repeated
/// vertices (closer than 1e-14 rad) are dropped first; fewer than three
/// distinct vertices give 0.
double girard_area(std::span<const Vec3> poly);

/// Area of a convex spherical polygon whose k-th edge runs from poly[k] to
/// poly[k+1] along the great circle with unit normal arcs[k], the normal
/// pointing into the polygon: 2 pi minus the sum of turning angles. Needs no
/// vertex merging and tolerates nearly antipodal neighbours.
double polygon_area(std::span<const Vec3> poly, std::span<const Vec3> arcs);
/// Order of `dirs` (all with positive dot product against `pole`) counter-
/// clockwise around their centroid as seen from outside along `pole`.
std::vector<std::size_t> ccw_order(std::span<const Vec3> dirs, const Vec3& pole);

/// Orthonormal (e1, e2) with e1 x e2 == pole.
void tangent_frame(const Vec3& pole, Vec3& e1, Vec3& e2);

}  // namespace lpalex::spherical
