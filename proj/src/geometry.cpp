#include "lpalex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "lpalex/errors.hpp"
#include "lpalex/predicates.hpp"
#include "lpalex/spherical.hpp"

namespace lpalex {

RadialConfig RadialConfig::scaled(double lambda) const {
  RadialConfig out = *this;
  for (double& r : out.radii) r *= lambda;
  return out;
}

std::size_t SymmetricPolytope::vertex_count() const {
  return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), AtomStatus::vertex));
}

double SymmetricPolytope::support(const Vec3& v) const {
  double h = 0.0;
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    if (status_[i] != AtomStatus::vertex) continue;
    h = std::max(h, config_.radii[i] * std::abs(dirs_[i].dot(v)));
  }
  return h;
}

double SymmetricPolytope::radial(const Vec3& u) const {
  double r = std::numeric_limits<double>::infinity();
  for (const Facet& f : facets_) {
    const double d = f.normal.dot(u);
    if (d > 0.0) r = std::min(r, f.offset / d);
  }
  return r;
}

double SymmetricPolytope::polar_support(const Vec3& u) const {
  double h = 0.0;
  for (const Facet& f : facets_) h = std::max(h, f.normal.dot(u) / f.offset);
  return h;
}

namespace {

// A raw hull face: an edge (n = 2) or a triangle (n = 3) over point indices.
struct RawFace {
  std::vector<int> verts;
  Vec3 normal;    // unit, outward
  double weight;  // length or area
};

struct RawHull {
  std::vector<RawFace> faces;
  std::vector<std::pair<int, int>> adjacency;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Upper half-plane first, then counter-clockwise; exact.
bool angular_less(const Vec3& a, const Vec3& b) {
  auto half = [](const Vec3& p) { return (p.y() > 0.0 || (p.y() == 0.0 && p.x() > 0.0)) ? 0 : 1; };
  const int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return predicates::orient2d(Vec3::Zero(), a, b) > 0;
}

RawHull hull_2d(const std::vector<Vec3>& pts) {
  const Vec3 origin = Vec3::Zero();
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (angular_less(pts[a], pts[b])) return true;
    if (angular_less(pts[b], pts[a])) return false;
    return a < b;
  });
  // Keep only the farthest point along each exact ray.
  std::vector<int> ray;
  for (int i : idx) {
    if (!ray.empty()) {
      const Vec3& q = pts[ray.back()];
      const bool same_ray = predicates::orient2d(origin, q, pts[i]) == 0 && q.dot(pts[i]) > 0.0;
      if (same_ray) {
        if (pts[i].squaredNorm() > q.squaredNorm()) ray.back() = i;
        continue;
      }
    }
    ray.push_back(i);
  }
  if (ray.size() < 3) throw DegenerateHull("points do not span the plane");
  bool spans = false;
  for (std::size_t j = 1; j < ray.size() && !spans; ++j) {
    spans = predicates::orient2d(origin, pts[ray[0]], pts[ray[j]]) != 0;
  }
  if (!spans) throw DegenerateHull("points do not span the plane");

  std::size_t start = 0;
  for (std::size_t j = 1; j < ray.size(); ++j) {
    if (pts[ray[j]].squaredNorm() > pts[ray[start]].squaredNorm()) start = j;
  }
  std::vector<int> st;
  const std::size_t m = ray.size();
  for (std::size_t s = 0; s <= m; ++s) {
    const int q = ray[(start + s) % m];
    while (st.size() >= 2 && predicates::orient2d(pts[st[st.size() - 2]], pts[st.back()], pts[q]) <= 0) {
      st.pop_back();
    }
    st.push_back(q);
  }
  st.pop_back();

  RawHull h;
  const std::size_t k = st.size();
  for (std::size_t j = 0; j < k; ++j) {
    const Vec3& a = pts[st[j]];
    const Vec3& b = pts[st[(j + 1) % k]];
    const Vec3 d = b - a;
    h.faces.push_back({{st[j], st[(j + 1) % k]}, Vec3(d.y(), -d.x(), 0.0).normalized(), d.norm()});
    h.adjacency.emplace_back(static_cast<int>(j), static_cast<int>((j + 1) % k));
  }
  return h;
}

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Unit normal of (a, b, c) with the cross product anchored where the two
// shortest edges meet.
Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c, double& area) {
  const double la = (c - b).squaredNorm();  // opposite a
  const double lb = (a - c).squaredNorm();
  const double lc = (b - a).squaredNorm();
  Vec3 cr;
  if (la >= lb && la >= lc) {
    cr = (b - a).cross(c - a);
  } else if (lb >= la && lb >= lc) {
    cr = (c - b).cross(a - b);
  } else {
    cr = (a - c).cross(b - c);
  }
  const double len = cr.norm();
  area = 0.5 * len;
  return cr / len;
}

RawHull hull_3d(const std::vector<Vec3>& pts) {
  using predicates::orient3d;
  const int np = static_cast<int>(pts.size());
  if (np < 4) throw DegenerateHull("fewer than four points");

  int i0 = 0;
  for (int i = 1; i < np; ++i) {
    if (pts[i].squaredNorm() > pts[i0].squaredNorm()) i0 = i;
  }
  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < np; ++i) {
    const double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) best = d, i1 = i;
  }
  int i2 = -1;
  best = -1.0;
  const Vec3 axis = (pts[i1] - pts[i0]).normalized();
  for (int i = 0; i < np; ++i) {
    const double d = (pts[i] - pts[i0]).cross(axis).squaredNorm();
    if (d > best && i != i0 && i != i1) best = d, i2 = i;
  }
  int i3 = -1;
  best = -1.0;
  const Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  for (int i = 0; i < np; ++i) {
    const double d = std::abs((pts[i] - pts[i0]).dot(nrm));
    if (d > best && i != i0 && i != i1 && i != i2) best = d, i3 = i;
  }
  if (orient3d(pts[i0], pts[i1], pts[i2], pts[i3]) == 0) {
    // The floating-point choice can miss a thin direction; search exactly.
    auto collinear = [&](int a, int b, int c) {
      auto proj = [&](int idx, int x, int y) { return Vec3(pts[idx](x), pts[idx](y), 0.0); };
      for (const auto& [x, y] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
        if (predicates::orient2d(proj(a, x, y), proj(b, x, y), proj(c, x, y)) != 0) return false;
      }
      return true;
    };
    i2 = -1;
    for (int c = 0; c < np && i2 < 0; ++c) {
      if (c != i0 && c != i1 && !collinear(i0, i1, c)) i2 = c;
    }
    if (i2 < 0) throw DegenerateHull("points do not span R^3");
    i3 = -1;
    for (int d = 0; d < np && i3 < 0; ++d) {
      if (orient3d(pts[i0], pts[i1], pts[i2], pts[d]) != 0) i3 = d;
    }
    if (i3 < 0) throw DegenerateHull("points do not span R^3");
  }

  struct Tri {
    int v[3];
    bool alive;
  };
  std::vector<Tri> tris;
  std::unordered_map<std::uint64_t, int> edge_face;
  auto add_face = [&](int a, int b, int c) {
    const int id = static_cast<int>(tris.size());
    tris.push_back({{a, b, c}, true});
    edge_face[edge_key(a, b)] = id;
    edge_face[edge_key(b, c)] = id;
    edge_face[edge_key(c, a)] = id;
  };
  auto kill_face = [&](int id) {
    Tri& t = tris[id];
    t.alive = false;
    for (int e = 0; e < 3; ++e) {
      auto it = edge_face.find(edge_key(t.v[e], t.v[(e + 1) % 3]));
      if (it != edge_face.end() && it->second == id) edge_face.erase(it);
    }
  };

  const int tet[4] = {i0, i1, i2, i3};
  for (int skip = 0; skip < 4; ++skip) {
    int f[3], k = 0;
    for (int j = 0; j < 4; ++j)
      if (j != skip) f[k++] = tet[j];
    if (orient3d(pts[f[0]], pts[f[1]], pts[f[2]], pts[tet[skip]]) > 0) std::swap(f[1], f[2]);
    add_face(f[0], f[1], f[2]);
  }

  std::vector<char> visible;
  for (int p = 0; p < np; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.assign(tris.size(), 0);
    std::vector<int> vis;
    for (int f = 0; f < static_cast<int>(tris.size()); ++f) {
      const Tri& t = tris[f];
      if (!t.alive) continue;
      if (orient3d(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], pts[p]) > 0) {
        visible[f] = 1;
        vis.push_back(f);
      }
    }
    if (vis.empty()) continue;
    std::vector<std::pair<int, int>> horizon;
    for (int f : vis) {
      const Tri& t = tris[f];
      for (int e = 0; e < 3; ++e) {
        const int a = t.v[e], b = t.v[(e + 1) % 3];
        const int g = edge_face.at(edge_key(b, a));
        if (!visible[g]) horizon.emplace_back(a, b);
      }
    }
    for (int f : vis) kill_face(f);
    for (const auto& [a, b] : horizon) add_face(a, b, p);
  }

  RawHull h;
  std::vector<int> remap(tris.size(), -1);
  for (std::size_t f = 0; f < tris.size(); ++f) {
    if (!tris[f].alive) continue;
    const Tri& t = tris[f];
    double area = 0.0;
    const Vec3 nn = triangle_normal(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], area);
    remap[f] = static_cast<int>(h.faces.size());
    h.faces.push_back({{t.v[0], t.v[1], t.v[2]}, nn, area});
  }
  for (std::size_t f = 0; f < tris.size(); ++f) {
    if (!tris[f].alive) continue;
    const Tri& t = tris[f];
    for (int e = 0; e < 3; ++e) {
      const int g = edge_face.at(edge_key(t.v[(e + 1) % 3], t.v[e]));
      if (static_cast<int>(f) < g) h.adjacency.emplace_back(remap[f], remap[g]);
    }
  }
  return h;
}

struct MergedHull {
  std::vector<Facet> facets;
  // Facet indices incident to each point.
  std::vector<std::vector<std::size_t>> point_facets;
  std::vector<RawFace> raw;
  std::vector<int> group;  // raw face -> facet
};

MergedHull merge_faces(const RawHull& raw, const std::vector<Vec3>& pts) {
  UnionFind uf(raw.faces.size());
  double reach = 0.0;
  for (const auto& f : raw.faces)
    for (int v : f.verts) reach = std::max(reach, pts[v].norm());
  auto offset = [&](const RawFace& f) { return f.normal.dot(pts[f.verts[0]]); };
  // The angular threshold is scaled by offset / reach so that thin bodies,
  // whose facets sit close to the origin, keep their genuine corners.
  for (const auto& [a, b] : raw.adjacency) {
    const double gap = (raw.faces[a].normal - raw.faces[b].normal).norm();
    const double scale = std::min(1.0, std::min(offset(raw.faces[a]), offset(raw.faces[b])) / reach);
    if (gap < kCoplanarTolerance * scale) uf.unite(a, b);
  }
  std::vector<int> group(raw.faces.size(), -1);
  std::vector<Vec3> nsum;
  std::vector<std::vector<int>> gverts;
  for (std::size_t f = 0; f < raw.faces.size(); ++f) {
    const int root = uf.find(static_cast<int>(f));
    if (group[root] < 0) {
      group[root] = static_cast<int>(nsum.size());
      nsum.push_back(Vec3::Zero());
      gverts.emplace_back();
    }
    const int g = group[root];
    group[f] = g;
    nsum[g] += raw.faces[f].weight * raw.faces[f].normal;
    for (int v : raw.faces[f].verts) gverts[g].push_back(v);
  }
  MergedHull out;
  out.raw = raw.faces;
  out.group = group;
  out.point_facets.resize(pts.size());
  for (std::size_t g = 0; g < nsum.size(); ++g) {
    auto& vs = gverts[g];
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    Facet f;
    f.normal = nsum[g].normalized();
    double off = 0.0;
    for (int v : vs) off += f.normal.dot(pts[v]);
    f.offset = off / static_cast<double>(vs.size());
    out.facets.push_back(f);
    for (int v : vs) out.point_facets[v].push_back(g);
  }
  return out;
}

// Walks the outward-oriented triangles around point `c`: triangle (c, a, b)
// is followed by the one starting at b. Consecutive triangles of different
// facets meet along the hull edge (c, b), which fixes the arc normal.
void link_order(const MergedHull& hull, const std::vector<Vec3>& pts, int c, std::vector<std::size_t>& facets,
                std::vector<Vec3>& arcs) {
  std::unordered_map<int, std::pair<int, int>> next;  // a -> (b, facet)
  for (std::size_t f = 0; f < hull.raw.size(); ++f) {
    const auto& v = hull.raw[f].verts;
    for (int k = 0; k < 3; ++k) {
      if (v[k] == c) next[v[(k + 1) % 3]] = {v[(k + 2) % 3], hull.group[f]};
    }
  }
  std::vector<int> tri_facet, tri_end;
  int a = next.begin()->first;
  for (std::size_t step = 0; step < next.size(); ++step) {
    const auto it = next.find(a);
    if (it == next.end()) throw DegenerateHull("open vertex link in hull");
    tri_facet.push_back(it->second.second);
    tri_end.push_back(it->second.first);
    a = it->second.first;
  }
  // Start right after a facet change so that runs are contiguous.
  const std::size_t m = tri_facet.size();
  std::size_t start = 0;
  while (start < m && tri_facet[(start + m - 1) % m] == tri_facet[start]) ++start;
  facets.clear();
  arcs.clear();
  if (start == m) return;
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t k = (start + s) % m;
    const std::size_t k1 = (k + 1) % m;
    if (s == 0) facets.push_back(static_cast<std::size_t>(tri_facet[k]));
    if (tri_facet[k1] != tri_facet[k]) {
      arcs.push_back((pts[c] - pts[tri_end[k]]).normalized());
      if (s + 1 < m) facets.push_back(static_cast<std::size_t>(tri_facet[k1]));
    }
  }
}

}  // namespace

SymmetricPolytope build_polytope(int n, std::span<const Vec3> dirs, const RadialConfig& config) {
  if (n != 2 && n != 3) throw DimensionUnsupported(n);
  if (dirs.size() != config.size()) throw InvalidArgument("directions and radii differ in length");
  if (dirs.empty()) throw DegenerateHull("no atoms");
  for (double r : config.radii) {
    if (!std::isfinite(r) || r <= 0.0) throw InvalidArgument("radii must be positive and finite");
  }

  SymmetricPolytope poly;
  poly.n_ = n;
  poly.dirs_.reserve(dirs.size());
  for (const Vec3& u : dirs) {
    Vec3 v = u;
    if (n == 2) v.z() = 0.0;
    const double len = v.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw InvalidArgument("zero or non-finite direction");
    poly.dirs_.push_back(v / len);
  }
  const std::size_t m = dirs.size();

  std::vector<Vec3> pts(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    pts[2 * i] = config.radii[i] * poly.dirs_[i];
    pts[2 * i + 1] = -pts[2 * i];
  }

  auto hull_of = [&](const std::vector<int>& ids) {
    std::vector<Vec3> sub;
    sub.reserve(ids.size());
    for (int id : ids) sub.push_back(pts[id]);
    RawHull raw = n == 2 ? hull_2d(sub) : hull_3d(sub);
    for (auto& f : raw.faces)
      for (int& v : f.verts) v = ids[v];
    return merge_faces(raw, pts);
  };
  auto radial_of = [](const std::vector<Facet>& facets, const Vec3& u) {
    double r = std::numeric_limits<double>::infinity();
    for (const Facet& f : facets) {
      const double d = f.normal.dot(u);
      if (d > 0.0) r = std::min(r, f.offset / d);
    }
    return r;
  };

  std::vector<int> ids(2 * m);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<bool> corner(m, false);
  MergedHull hull = hull_of(ids);
  for (std::size_t i = 0; i < m; ++i) {
    // Exact predicates keep every raw hull vertex on the boundary; near ties
    // end up with fewer than n facets after the coplanar merge.
    corner[i] = hull.point_facets[2 * i].size() >= static_cast<std::size_t>(n);
  }
  // Rebuild from the corners alone until the corner set is stable.
  for (int round = 0; round < 8; ++round) {
    ids.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (!corner[i]) continue;
      ids.push_back(static_cast<int>(2 * i));
      ids.push_back(static_cast<int>(2 * i + 1));
    }
    hull = hull_of(ids);
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (corner[i] && hull.point_facets[2 * i].size() < static_cast<std::size_t>(n)) {
        corner[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }

  poly.facets_ = hull.facets;
  poly.config_ = config;
  poly.status_.assign(m, AtomStatus::absorbed);
  poly.incident_.assign(m, {});
  poly.arcs_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    if (!corner[i]) {
      poly.config_.radii[i] = radial_of(poly.facets_, poly.dirs_[i]);
      continue;
    }
    poly.status_[i] = AtomStatus::vertex;
    std::vector<std::size_t> inc = hull.point_facets[2 * i];
    if (n == 2) {
      const Vec3& a = poly.facets_[inc[0]].normal;
      const Vec3& b = poly.facets_[inc[1]].normal;
      if (a.x() * b.y() - a.y() * b.x() < 0.0) std::swap(inc[0], inc[1]);
    } else {
      link_order(hull, pts, static_cast<int>(2 * i), inc, poly.arcs_[i]);
    }
    poly.incident_[i] = std::move(inc);
  }
  return poly;
}

SymmetricPolytope build_polytope(const DiscreteEvenMeasure& measure, const RadialConfig& config) {
  const auto dirs = measure.directions();
  return build_polytope(measure.dim(), dirs, config);
}

std::vector<NormalCone> normal_fan(const SymmetricPolytope& poly) {
  std::vector<NormalCone> fan(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    fan[i].atom = i;
    for (std::size_t f : poly.incident(i)) fan[i].boundary.push_back(poly.facets()[f].normal);
    if (fan[i].boundary.empty()) continue;
    if (poly.dim() == 2) {
      const Vec3& a = fan[i].boundary[0];
      const Vec3& b = fan[i].boundary[1];
      fan[i].area = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    } else {
      fan[i].arcs = poly.arc_normals(i);
      fan[i].area = spherical::polygon_area(fan[i].boundary, fan[i].arcs);
    }
  }
  return fan;
}

}  // namespace lpalex
