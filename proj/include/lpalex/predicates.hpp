#pragma once

#include "lpalex/vec.hpp"

namespace lpalex::predicates {

// Exact-sign orientation tests. A floating-point filter decides the easy
// cases; the rest are evaluated in exact rational arithmetic.

/// Sign of det[b - a, c - a] using the x,y coordinates: +1 for a left turn.
int orient2d(const Vec3& a, const Vec3& b, const Vec3& c);

/// Sign of det[b - a, c - a, d - a]: +1 when d lies on the side of the plane
/// (a, b, c) that the normal (b - a) x (c - a) points into.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace lpalex::predicates
