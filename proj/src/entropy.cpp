#include "lpalex/entropy.hpp"

#include <cmath>
#include <string>

#include "lpalex/errors.hpp"
#include "lpalex/quadrature.hpp"
#include "lpalex/spherical.hpp"

namespace lpalex {

void QuadratureSpec::validate() const {
  if (degree < 4) throw InvalidArgument("quadrature degree must be at least 4");
  if (max_subdivision < 0) throw InvalidArgument("max_subdivision must be non-negative");
  if (!(rel_tol >= 1e-12) || !std::isfinite(rel_tol)) throw InvalidArgument("rel_tol must be >= 1e-12");
}

double unit_ball_volume(int k) {
  if (k < 0) throw InvalidArgument("negative dimension");
  return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

BallConstants ball_constants(int n) {
  if (n != 2 && n != 3) throw DimensionUnsupported(n);
  BallConstants c;
  c.n = n;
  for (int k = 0; k <= n; ++k) c.omega.push_back(unit_ball_volume(k));
  c.omega_n = c.omega[n];
  c.surface = n * c.omega_n;
  return c;
}

namespace {

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& q) {
  const quad::GaussRule rule(q.degree);
  const quad::Estimate est = quad::adaptive(f, a, b, rule, q.rel_tol, kEntropyAbsFloor, q.max_subdivision);
  if (!est.converged) {
    throw QuadratureNotConverged("entropy panel on [" + std::to_string(a) + ", " + std::to_string(b) +
                                 "] did not converge");
  }
  return est.value;
}

// Antiderivative of log w.
double xlogx_minus_x(double w) { return w > 0.0 ? w * std::log(w) - w : 0.0; }

// (x log x - x + 1) / (1 - x^2) with a series near x = 1; negated.
double boundary_kernel(double c) {
  const double w = 1.0 - c;
  if (w < 1e-3) {
    double f_over_w = 0.0, wk = 1.0;
    for (int k = 2; k < 12; ++k) {
      wk *= w;
      f_over_w += wk / (k * (k - 1.0));
    }
    return -f_over_w / (2.0 - w);
  }
  return -(c * std::log(c) - c + 1.0) / ((1.0 - c) * (1.0 + c));
}

}  // namespace

double log_cos_integral(double lo, double hi, const QuadratureSpec& quad) {
  if (!(hi > lo)) return 0.0;
  const double half_pi = 0.5 * kPi;
  // log cos psi = s(psi) + log(pi/2 - psi) + log(pi/2 + psi) with s smooth.
  auto smooth = [half_pi](double psi) {
    const double d = half_pi - std::abs(psi);
    if (d < 1e-8) return -std::log(kPi);
    return std::log(std::sin(d) / (d * (kPi - d)));
  };
  const double part = integrate(smooth, lo, hi, quad);
  const double minus = xlogx_minus_x(half_pi - lo) - xlogx_minus_x(half_pi - hi);
  const double plus = xlogx_minus_x(half_pi + hi) - xlogx_minus_x(half_pi + lo);
  return part + minus + plus;
}

double log_dot_integral_3d(const Vec3& u, const std::vector<Vec3>& cone, const std::vector<Vec3>& arcs,
                           const QuadratureSpec& quad) {
  const std::size_t m = cone.size();
  if (m < 2 || arcs.size() != m) return 0.0;
  double total = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    const Vec3& a = cone[e];
    const Vec3& b = cone[(e + 1) % m];
    const Vec3& nrm = arcs[e];
    const double len = std::atan2(nrm.dot(a.cross(b)), a.dot(b));
    if (len <= 0.0) continue;
    const Vec3 t = nrm.cross(a).normalized();
    const double ua = u.dot(a), ut = u.dot(t);
    const double weight = u.dot(a.cross(t));
    auto f = [ua, ut](double s) {
      const double c = std::min(1.0, ua * std::cos(s) + ut * std::sin(s));
      return boundary_kernel(c);
    };
    total += weight * integrate(f, 0.0, len, quad);
  }
  return total;
}

double log_dot_integral_3d(const Vec3& u, const std::vector<Vec3>& cone, const QuadratureSpec& quad) {
  const std::vector<Vec3> poly = spherical::merge_close_vertices(cone);
  const std::size_t m = poly.size();
  if (m < 3) return 0.0;
  std::vector<Vec3> arcs(m);
  for (std::size_t e = 0; e < m; ++e) arcs[e] = poly[e].cross(poly[(e + 1) % m]).normalized();
  return log_dot_integral_3d(u, poly, arcs, quad);
}

double entropy(const SymmetricPolytope& poly, const QuadratureSpec& quad) {
  quad.validate();
  const auto fan = normal_fan(poly);
  double sum = 0.0;
  for (const NormalCone& cone : fan) {
    if (cone.boundary.empty()) continue;
    const Vec3& u = poly.directions()[cone.atom];
    sum += cone.area * std::log(poly.radius(cone.atom));
    if (poly.dim() == 2) {
      const Vec3& a = cone.boundary[0];
      const double lo = std::atan2(u.x() * a.y() - u.y() * a.x(), u.dot(a));
      sum += log_cos_integral(lo, lo + cone.area, quad);
    } else {
      sum += log_dot_integral_3d(u, cone.boundary, cone.arcs, quad);
    }
  }
  return -2.0 * sum;
}

std::vector<double> entropy_gradient(const SymmetricPolytope& poly) {
  const auto fan = normal_fan(poly);
  std::vector<double> g(fan.size());
  for (std::size_t i = 0; i < fan.size(); ++i) g[i] = -2.0 * fan[i].area;
  return g;
}

}  // namespace lpalex
