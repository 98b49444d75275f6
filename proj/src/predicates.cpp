#include "lpalex/predicates.hpp"

#include <cmath>
#include <limits>

#include <gmpxx.h>

namespace lpalex::predicates {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
// Forward error bounds in the style of Shewchuk's static filters.
constexpr double kOrient2dBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kOrient3dBound = (7.0 + 56.0 * kEps) * kEps;

int sign_of(const mpq_class& q) { return sgn(q); }

}  // namespace

int orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double acx = a.x() - c.x(), bcx = b.x() - c.x();
  const double acy = a.y() - c.y(), bcy = b.y() - c.y();
  const double left = acx * bcy;
  const double right = acy * bcx;
  const double det = left - right;
  const double bound = kOrient2dBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;

  const mpq_class ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  const mpq_class d = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return sign_of(d);
}

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // det[b - a, c - a, d - a] == -det[a - d, b - d, c - d]
  const double adx = a.x() - d.x(), bdx = b.x() - d.x(), cdx = c.x() - d.x();
  const double ady = a.y() - d.y(), bdy = b.y() - d.y(), cdy = c.y() - d.y();
  const double adz = a.z() - d.z(), bdz = b.z() - d.z(), cdz = c.z() - d.z();

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = kOrient3dBound * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;

  const mpq_class Ax(a.x()), Ay(a.y()), Az(a.z());
  const mpq_class Bx(b.x()), By(b.y()), Bz(b.z());
  const mpq_class Cx(c.x()), Cy(c.y()), Cz(c.z());
  const mpq_class Dx(d.x()), Dy(d.y()), Dz(d.z());
  const mpq_class ax = Ax - Dx, ay = Ay - Dy, az = Az - Dz;
  const mpq_class bx = Bx - Dx, by = By - Dy, bz = Bz - Dz;
  const mpq_class cx = Cx - Dx, cy = Cy - Dy, cz = Cz - Dz;
  const mpq_class exact = az * (bx * cy - cx * by) + bz * (cx * ay - ax * cy) + cz * (ax * by - bx * ay);
  return -sign_of(exact);
}

}  // namespace lpalex::predicates
