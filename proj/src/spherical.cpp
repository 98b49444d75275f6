#include "lpalex/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lpalex::spherical {

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::vector<Vec3> merge_close_vertices(std::span<const Vec3> poly, double tol) {
  std::vector<Vec3> out;
  out.reserve(poly.size());
  for (const Vec3& v : poly) {
    if (out.empty() || angle_between(out.back(), v) >= tol) out.push_back(v);
  }
  while (out.size() > 1 && angle_between(out.front(), out.back()) < tol) out.pop_back();
  return out;
}

double girard_area(std::span<const Vec3> poly) {
  const std::vector<Vec3> pts = merge_close_vertices(poly);
  const std::size_t m = pts.size();
  if (m < 3) return 0.0;
  double angle_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& prev = pts[(i + m - 1) % m];
    const Vec3& cur = pts[i];
    const Vec3& next = pts[(i + 1) % m];
    // Tangents at `cur` pointing along the two incident arcs.
    Vec3 to_next = next - next.dot(cur) * cur;
    Vec3 to_prev = prev - prev.dot(cur) * cur;
    to_next.normalize();
    to_prev.normalize();
    // Interior angle: counter-clockwise sweep from the outgoing to the incoming arc.
    double ang = std::atan2(cur.dot(to_next.cross(to_prev)), to_next.dot(to_prev));
    if (ang < 0.0) ang += 2.0 * kPi;
    angle_sum += ang;
  }
  return std::max(0.0, angle_sum - static_cast<double>(m - 2) * kPi);
}

double polygon_area(std::span<const Vec3> poly, std::span<const Vec3> arcs) {
  const std::size_t m = poly.size();
  if (m < 2 || arcs.size() != m) return 0.0;
  double turning = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec3& a = poly[k];
    const Vec3 t_in = arcs[(k + m - 1) % m].cross(a);
    const Vec3 t_out = arcs[k].cross(a);
    turning += std::atan2(a.dot(t_in.cross(t_out)), t_in.dot(t_out));
  }
  return std::max(0.0, 2.0 * kPi - turning);
}

void tangent_frame(const Vec3& pole, Vec3& e1, Vec3& e2) {
  const Vec3 seed = std::abs(pole.x()) < 0.6 ? Vec3::UnitX()
                    : std::abs(pole.y()) < 0.6 ? Vec3::UnitY()
                                               : Vec3::UnitZ();
  e1 = (seed - seed.dot(pole) * pole).normalized();
  e2 = pole.cross(e1);
}

std::vector<std::size_t> ccw_order(std::span<const Vec3> dirs, const Vec3& pole) {
  Vec3 e1, e2;
  tangent_frame(pole, e1, e2);
  // Gnomonic projection onto the tangent plane at `pole` keeps convexity.
  std::vector<Eigen::Vector2d> q(dirs.size());
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3 g = dirs[i] / dirs[i].dot(pole);
    q[i] = {g.dot(e1), g.dot(e2)};
    centroid += q[i];
  }
  centroid /= static_cast<double>(std::max<std::size_t>(dirs.size(), 1));
  std::vector<double> key(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Eigen::Vector2d d = q[i] - centroid;
    key[i] = std::atan2(d.y(), d.x());
  }
  std::vector<std::size_t> order(dirs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

}  // namespace lpalex::spherical
