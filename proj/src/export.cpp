#include "lpalex/export.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lpalex/errors.hpp"
#include "lpalex/spherical.hpp"

namespace lpalex::exporter {

namespace {

constexpr double kFacetTolerance = 1e-9;

// Vertex points of the polytope lying on facet f, in counter-clockwise
// order seen from outside.
std::vector<Vec3> facet_polygon(const SymmetricPolytope& poly, const Facet& f) {
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!poly.is_vertex(i)) continue;
    for (double sign : {1.0, -1.0}) {
      const Vec3 x = sign * poly.point(i);
      if (std::abs(f.normal.dot(x) - f.offset) <= kFacetTolerance * std::max(1.0, f.offset)) pts.push_back(x);
    }
  }
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& x : pts) centroid += x;
  centroid /= static_cast<double>(std::max<std::size_t>(pts.size(), 1));
  Vec3 e1, e2;
  spherical::tangent_frame(f.normal, e1, e2);
  std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
    return std::atan2((a - centroid).dot(e2), (a - centroid).dot(e1)) <
           std::atan2((b - centroid).dot(e2), (b - centroid).dot(e1));
  });
  return pts;
}

}  // namespace

std::string svg(const SymmetricPolytope& poly, const std::vector<double>& signed_residuals) {
  if (poly.dim() != 2) throw InvalidArgument("SVG export needs a planar polytope");
  double extent = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) extent = std::max(extent, poly.radius(i));
  const double size = 480.0, half = size / 2.0, scale = 0.4 * size / extent;
  auto X = [&](double x) { return half + scale * x; };
  auto Y = [&](double y) { return half - scale * y; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      size);

  // Polygon from the facet structure.
  std::vector<std::pair<double, Vec3>> verts;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!poly.is_vertex(i)) continue;
    for (double sign : {1.0, -1.0}) {
      const Vec3 x = sign * poly.point(i);
      verts.emplace_back(std::atan2(x.y(), x.x()), x);
    }
  }
  std::sort(verts.begin(), verts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out += "<polygon fill=\"#eef3fb\" stroke=\"#1f3b73\" stroke-width=\"2\" points=\"";
  for (const auto& [ang, x] : verts) out += fmt::format("{:.3f},{:.3f} ", X(x.x()), Y(x.y()));
  out += "\"/>\n";

  const double ray = 1.15 * extent;
  const double arc = 0.22 * extent;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3 u = poly.directions()[i];
    for (double sign : {1.0, -1.0}) {
      out += fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#888\" "
                         "stroke-dasharray=\"4 3\"/>\n",
                         X(0), Y(0), X(sign * ray * u.x()), Y(sign * ray * u.y()));
    }
    if (!poly.is_vertex(i)) continue;
    const double r = i < signed_residuals.size() ? signed_residuals[i] : 0.0;
    const char* colour = r > 0.0 ? "#c0392b" : (r < 0.0 ? "#2471a3" : "#27ae60");
    const auto& inc = poly.incident(i);
    const Vec3 a = poly.facets()[inc[0]].normal;
    const Vec3 b = poly.facets()[inc[1]].normal;
    for (double sign : {1.0, -1.0}) {
      const Vec3 c = sign * poly.point(i);
      const Vec3 p0 = c + arc * sign * a, p1 = c + arc * sign * b;
      out += fmt::format("<path d=\"M {:.3f} {:.3f} L {:.3f} {:.3f} A {:.3f} {:.3f} 0 0 0 {:.3f} {:.3f} Z\" "
                         "fill=\"{}\" fill-opacity=\"0.45\" stroke=\"{}\"/>\n",
                         X(c.x()), Y(c.y()), X(p0.x()), Y(p0.y()), scale * arc, scale * arc, X(p1.x()),
                         Y(p1.y()), colour, colour);
    }
  }
  out += "</svg>\n";
  return out;
}

std::string obj(const SymmetricPolytope& poly) {
  if (poly.dim() != 3) throw InvalidArgument("OBJ export needs a 3-polytope");
  std::string out = "# lpalex facet mesh\n";
  std::vector<Vec3> table;
  auto index_of = [&](const Vec3& x) {
    for (std::size_t k = 0; k < table.size(); ++k)
      if ((table[k] - x).norm() <= 1e-12 * std::max(1.0, x.norm())) return k + 1;
    table.push_back(x);
    out += fmt::format("v {:.17g} {:.17g} {:.17g}\n", x.x(), x.y(), x.z());
    return table.size();
  };
  std::vector<std::vector<std::size_t>> faces;
  for (const Facet& f : poly.facets()) {
    std::vector<std::size_t> face;
    for (const Vec3& x : facet_polygon(poly, f)) face.push_back(index_of(x));
    faces.push_back(std::move(face));
  }
  for (const Facet& f : poly.facets())
    out += fmt::format("vn {:.17g} {:.17g} {:.17g}\n", f.normal.x(), f.normal.y(), f.normal.z());
  for (std::size_t k = 0; k < faces.size(); ++k) {
    out += "f";
    for (std::size_t v : faces[k]) out += fmt::format(" {}//{}", v, k + 1);
    out += "\n";
  }
  return out;
}

std::string csv(const DiscreteEvenMeasure& measure, const SolveReport& report, const VerifyReport& check) {
  std::string out = "atom,u_x,u_y,u_z,mu,rho,J,Jp,residual\n";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const Vec3& u = measure[i].u;
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, u.x(), u.y(),
                       u.z(), measure[i].weight, report.radii.radii[i], check.J[i], check.Jp[i],
                       check.residuals[i]);
  }
  out += "\niteration,phi\n";
  for (std::size_t k = 0; k < report.phi_trace.size(); ++k)
    out += fmt::format("{},{:.17g}\n", k, report.phi_trace[k]);
  return out;
}

}  // namespace lpalex::exporter
