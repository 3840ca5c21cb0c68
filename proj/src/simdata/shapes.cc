#include "binpose/simdata/shapes.h"

#include <cmath>
#include <numbers>

#include "binpose/errors.h"

namespace binpose::simdata {

using geometry::TriangleMesh;
using geometry::Vec3;
using Vec2 = Eigen::Vector2d;

namespace {

double Cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool InTriangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return Cross(a, b, p) >= 0.0 && Cross(b, c, p) >= 0.0 && Cross(c, a, p) >= 0.0;
}

// Ear clipping for a simple counter-clockwise polygon.
std::vector<std::array<int, 3>> Triangulate(const std::vector<Vec2>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const int a = idx[(i + idx.size() - 1) % idx.size()];
      const int b = idx[i];
      const int c = idx[(i + 1) % idx.size()];
      if (Cross(poly[a], poly[b], poly[c]) <= 0.0) continue;
      bool blocked = false;
      for (int k : idx) {
        if (k == a || k == b || k == c) continue;
        if (InTriangle(poly[k], poly[a], poly[b], poly[c])) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw PreconditionError("ExtrudePolygon: polygon is not simple and CCW");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace

TriangleMesh ExtrudePolygon(const std::vector<Vec2>& polygon, double thickness) {
  if (polygon.size() < 3 || !(thickness > 0.0)) {
    throw PreconditionError("ExtrudePolygon: need >= 3 vertices and positive thickness");
  }
  const int n = static_cast<int>(polygon.size());
  const double h = 0.5 * thickness;
  TriangleMesh mesh;
  for (const Vec2& p : polygon) mesh.vertices.emplace_back(p.x(), p.y(), -h);
  for (const Vec2& p : polygon) mesh.vertices.emplace_back(p.x(), p.y(), h);
  for (const auto& t : Triangulate(polygon)) {
    mesh.triangles.push_back({t[0] + n, t[1] + n, t[2] + n});  // top, faces +z
    mesh.triangles.push_back({t[0], t[2], t[1]});              // bottom, faces -z
  }
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    mesh.triangles.push_back({i, j, j + n});
    mesh.triangles.push_back({i, j + n, i + n});
  }
  return mesh;
}

void CenterMesh(TriangleMesh& mesh) {
  if (mesh.vertices.empty()) return;
  Vec3 lo = mesh.vertices.front(), hi = lo;
  for (const Vec3& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3 c = 0.5 * (lo + hi);
  for (Vec3& v : mesh.vertices) v -= c;
}

TriangleMesh MakeBracketMesh() {
  const std::vector<Vec2> profile = {{0.0, 0.0},     {0.06, 0.0},    {0.06, 0.015},
                                     {0.015, 0.015}, {0.015, 0.035}, {0.0, 0.035}};
  TriangleMesh mesh = ExtrudePolygon(profile, 0.015);
  CenterMesh(mesh);
  return mesh;
}

TriangleMesh MakeHexNutMesh() {
  std::vector<Vec2> hex;
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3.0;
    hex.emplace_back(0.025 * std::cos(a), 0.025 * std::sin(a));
  }
  return ExtrudePolygon(hex, 0.02);
}

TriangleMesh MakeBoxMesh(const Vec3& extents) {
  const double x = 0.5 * extents.x(), y = 0.5 * extents.y();
  TriangleMesh mesh = ExtrudePolygon({{-x, -y}, {x, -y}, {x, y}, {-x, y}}, extents.z());
  return mesh;
}

std::vector<geometry::ObjectModel> ReferenceObjects() {
  std::vector<geometry::ObjectModel> out;
  out.push_back(geometry::ObjectModel::FromMesh("bracket", MakeBracketMesh(), false));
  out.push_back(geometry::ObjectModel::FromMesh("nut", MakeHexNutMesh(), true));
  return out;
}

}  // namespace binpose::simdata
