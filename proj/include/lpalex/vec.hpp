#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lpalex {

// Points and directions are stored in R^3; planar data has z == 0.
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace lpalex
