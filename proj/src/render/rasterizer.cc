#include "binpose/render/rasterizer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "binpose/errors.h"

namespace binpose::render {

namespace {

using Vec2 = Eigen::Vector2d;

struct Target {
  const CameraIntrinsics& cam;
  bool shade;
  std::vector<double> zbuf;
  std::vector<int> owner;
  std::vector<Rgb> color;
  // Winning triangle per pixel; only filled when non-empty.
  std::vector<int> triangle;
  int current_triangle = -1;

  Target(const CameraIntrinsics& c, bool with_color)
      : cam(c),
        shade(with_color),
        zbuf(static_cast<std::size_t>(c.width) * c.height,
             std::numeric_limits<double>::infinity()),
        owner(zbuf.size(), -1) {
    if (shade) color.assign(zbuf.size(), Rgb{0.f, 0.f, 0.f});
  }
};

// Inclusion rule for pixel centres lying exactly on an edge; a shared edge is
// walked in opposite directions by its two triangles, so exactly one of them
// claims the pixel.
bool OwnsEdge(const Vec2& a, const Vec2& b) {
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  return dy < 0.0 || (dy == 0.0 && dx > 0.0);
}

double Edge(const Vec2& a, const Vec2& b, double px, double py) {
  return (b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x());
}

void RasterizeScreenTriangle(Vec2 p0, Vec2 p1, Vec2 p2, const Vec3& normal,
                             double plane_d, int instance, const Rgb& rgb,
                             Target& t) {
  double area = Edge(p0, p1, p2.x(), p2.y());
  if (std::abs(area) < 1e-14) return;
  if (area < 0.0) std::swap(p1, p2);

  const CameraIntrinsics& cam = t.cam;
  const double min_x = std::min({p0.x(), p1.x(), p2.x()});
  const double max_x = std::max({p0.x(), p1.x(), p2.x()});
  const double min_y = std::min({p0.y(), p1.y(), p2.y()});
  const double max_y = std::max({p0.y(), p1.y(), p2.y()});
  const int u_begin = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
  const int u_end = std::min(cam.width - 1, static_cast<int>(std::floor(max_x - 0.5)));
  const int v_begin = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
  const int v_end = std::min(cam.height - 1, static_cast<int>(std::floor(max_y - 0.5)));
  if (u_begin > u_end || v_begin > v_end) return;

  const bool own01 = OwnsEdge(p0, p1), own12 = OwnsEdge(p1, p2),
             own20 = OwnsEdge(p2, p0);
  for (int v = v_begin; v <= v_end; ++v) {
    const double py = v + 0.5;
    for (int u = u_begin; u <= u_end; ++u) {
      const double px = u + 0.5;
      const double e01 = Edge(p0, p1, px, py);
      const double e12 = Edge(p1, p2, px, py);
      const double e20 = Edge(p2, p0, px, py);
      if (e01 < 0.0 || e12 < 0.0 || e20 < 0.0) continue;
      if ((e01 == 0.0 && !own01) || (e12 == 0.0 && !own12) ||
          (e20 == 0.0 && !own20)) {
        continue;
      }
      // Exact ray/plane intersection along the pixel-centre ray.
      const double denom = normal.dot(cam.PixelRay(u, v));
      if (std::abs(denom) < 1e-15) continue;
      const double z = plane_d / denom;
      if (!(z > 0.0)) continue;
      const std::size_t idx = static_cast<std::size_t>(v) * cam.width + u;
      if (z < t.zbuf[idx]) {
        t.zbuf[idx] = z;
        t.owner[idx] = instance;
        if (t.shade) t.color[idx] = rgb;
        if (!t.triangle.empty()) t.triangle[idx] = t.current_triangle;
      }
    }
  }
}

// Sutherland-Hodgman against z >= kNearPlane.
int ClipNear(const Vec3 (&in)[3], Vec3 (&out)[4]) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = in[i];
    const Vec3& b = in[(i + 1) % 3];
    const bool a_in = a.z() >= kNearPlane, b_in = b.z() >= kNearPlane;
    if (a_in) out[n++] = a;
    if (a_in != b_in) {
      const double s = (kNearPlane - a.z()) / (b.z() - a.z());
      Vec3 p = a + s * (b - a);
      p.z() = kNearPlane;
      out[n++] = p;
    }
  }
  return n;
}

void RasterizeMesh(const TriangleMesh& mesh, const Pose& pose, int instance,
                   const Vec3& albedo, const LightSpec& light, Target& t) {
  const Eigen::Matrix3d r = pose.rotation_matrix();
  std::vector<Vec3> verts;
  verts.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) verts.push_back(r * v + pose.translation());

  const CameraIntrinsics& cam = t.cam;
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& tri = mesh.triangles[k];
    t.current_triangle = static_cast<int>(k);
    const Vec3 corners[3] = {verts[tri[0]], verts[tri[1]], verts[tri[2]]};
    if (corners[0].z() < kNearPlane && corners[1].z() < kNearPlane &&
        corners[2].z() < kNearPlane) {
      continue;
    }
    Vec3 n = (corners[1] - corners[0]).cross(corners[2] - corners[0]);
    const double len = n.norm();
    if (!(len > 1e-20)) continue;
    n /= len;
    const double plane_d = n.dot(corners[0]);

    Rgb rgb{0.f, 0.f, 0.f};
    if (t.shade) {
      // Two-sided: light the side facing the camera.
      const Vec3 facing = plane_d > 0.0 ? Vec3(-n) : n;
      const double s = std::clamp(
          light.ambient + std::max(0.0, facing.dot(light.direction)), 0.0, 1.0);
      rgb = {static_cast<float>(s * albedo.x()), static_cast<float>(s * albedo.y()),
             static_cast<float>(s * albedo.z())};
    }

    Vec3 clipped[4];
    const int count = ClipNear(corners, clipped);
    if (count < 3) continue;
    Vec2 screen[4];
    for (int i = 0; i < count; ++i) screen[i] = cam.Project(clipped[i]);
    for (int i = 1; i + 1 < count; ++i) {
      RasterizeScreenTriangle(screen[0], screen[i], screen[i + 1], n, plane_d,
                              instance, rgb, t);
    }
  }
}

RenderOutput Resolve(const Target& t) {
  const CameraIntrinsics& cam = t.cam;
  RenderOutput out{ColorImage(cam.width, cam.height, Rgb{0.f, 0.f, 0.f}),
                   Mask(cam.width, cam.height, 0), DepthMap(cam.width, cam.height, 0.0)};
  for (std::size_t i = 0; i < t.zbuf.size(); ++i) {
    if (t.owner[i] < 0) continue;
    out.mask.data()[i] = 1;
    out.depth.data()[i] = t.zbuf[i];
    if (t.shade) out.image.data()[i] = t.color[i];
  }
  return out;
}

}  // namespace

void LightSpec::Validate() const {
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-9) {
    throw PreconditionError("LightSpec: direction must be a unit vector");
  }
  if (!(ambient >= 0.0 && ambient <= 1.0)) {
    throw PreconditionError("LightSpec: ambient must lie in [0, 1]");
  }
  if (!((albedo.array() >= 0.0).all() && (albedo.array() <= 1.0).all())) {
    throw PreconditionError("LightSpec: albedo must lie in [0, 1]^3");
  }
}

RenderOutput Render(const ObjectModel& model, const Pose& pose,
                    const CameraIntrinsics& cam, const LightSpec& light) {
  const RenderInstance inst{&model.mesh, pose, std::nullopt};
  return RenderScene(std::span<const RenderInstance>(&inst, 1), cam, light).combined;
}

DepthMap RenderDepth(const TriangleMesh& mesh, const Pose& pose,
                     const CameraIntrinsics& cam) {
  cam.Validate();
  Target t(cam, false);
  RasterizeMesh(mesh, pose, 0, Vec3::Zero(), LightSpec{}, t);
  DepthMap depth(cam.width, cam.height, 0.0);
  for (std::size_t i = 0; i < t.zbuf.size(); ++i) {
    if (t.owner[i] >= 0) depth.data()[i] = t.zbuf[i];
  }
  return depth;
}

std::vector<int> VisibleTriangles(const TriangleMesh& mesh, const Pose& pose,
                                  const CameraIntrinsics& cam) {
  cam.Validate();
  Target t(cam, false);
  t.triangle.assign(t.zbuf.size(), -1);
  RasterizeMesh(mesh, pose, 0, Vec3::Zero(), LightSpec{}, t);
  std::vector<char> seen(mesh.triangles.size(), 0);
  for (int k : t.triangle) {
    if (k >= 0) seen[k] = 1;
  }
  std::vector<int> out;
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (seen[k]) out.push_back(static_cast<int>(k));
  }
  return out;
}

SceneRenderOutput RenderScene(std::span<const RenderInstance> instances,
                              const CameraIntrinsics& cam, const LightSpec& light) {
  cam.Validate();
  light.Validate();
  if (instances.empty()) throw PreconditionError("RenderScene: no instances");
  Target t(cam, true);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const RenderInstance& inst = instances[i];
    if (inst.mesh == nullptr) throw PreconditionError("RenderScene: null mesh");
    RasterizeMesh(*inst.mesh, inst.pose, static_cast<int>(i),
                  inst.albedo.value_or(light.albedo), light, t);
  }
  SceneRenderOutput out;
  out.combined = Resolve(t);
  out.instance_masks.assign(instances.size(), Mask(cam.width, cam.height, 0));
  for (std::size_t i = 0; i < t.owner.size(); ++i) {
    if (t.owner[i] >= 0) out.instance_masks[t.owner[i]].data()[i] = 1;
  }
  return out;
}

}  // namespace binpose::render
