#include "binpose/geometry/object_model.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "binpose/errors.h"

namespace binpose::geometry {

PointCloud ApplyPose(const Pose& pose, const PointCloud& cloud) {
  const Mat3 r = pose.rotation_matrix();
  const Vec3& t = pose.translation();
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(r * p + t);
  return out;
}

Vec3 Centroid(const PointCloud& cloud) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : cloud.points) c += p;
  return cloud.empty() ? c : Vec3(c / static_cast<double>(cloud.size()));
}

PointCloud StrideSubsample(const PointCloud& cloud, std::size_t max_points) {
  if (max_points == 0 || cloud.size() <= max_points) return cloud;
  PointCloud out;
  out.points.reserve(max_points);
  // Evenly spaced indices floor(i * n / m).
  const std::size_t n = cloud.size();
  for (std::size_t i = 0; i < max_points; ++i) {
    out.points.push_back(cloud.points[i * n / max_points]);
  }
  return out;
}

void TriangleMesh::Validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const Vec3& v : vertices) {
    if (!v.allFinite()) throw PreconditionError("mesh: non-finite vertex");
  }
  for (const auto& tri : triangles) {
    for (int idx : tri) {
      if (idx < 0 || idx >= n) {
        throw PreconditionError("mesh: triangle index out of range");
      }
    }
  }
}

double MeshDiameter(const TriangleMesh& mesh) {
  double best = 0.0;
  const auto& v = mesh.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      best = std::max(best, (v[i] - v[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

PointCloud SampleSurface(const TriangleMesh& mesh, int count, std::uint64_t seed) {
  if (count <= 0) throw PreconditionError("SampleSurface: count must be positive");
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    total += 0.5 * (b - a).cross(c - a).norm();
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw PreconditionError("SampleSurface: mesh has zero area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  PointCloud out;
  out.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double pick = uni(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto& tri = mesh.triangles[it - cumulative.begin()];
    const double s = std::sqrt(uni(rng));
    const double r = uni(rng);
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    out.points.push_back((1.0 - s) * a + s * (1.0 - r) * b + s * r * c);
  }
  return out;
}

ObjectModel ObjectModel::FromMesh(std::string id, TriangleMesh mesh,
                                  bool symmetric, int point_count,
                                  std::uint64_t seed) {
  mesh.Validate();
  if (mesh.triangles.empty()) throw PreconditionError("ObjectModel: empty mesh");
  ObjectModel model;
  model.id = std::move(id);
  model.model_points = SampleSurface(mesh, point_count, seed);
  model.diameter = MeshDiameter(mesh);
  model.symmetric = symmetric;
  model.mesh = std::move(mesh);
  return model;
}

double ObjectModel::BoundingRadius() const {
  double r = 0.0;
  for (const Vec3& v : mesh.vertices) r = std::max(r, v.norm());
  return r;
}

}  // namespace binpose::geometry
