#include "binpose/estimator/icp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include <Eigen/SVD>

#include "binpose/errors.h"
#include "binpose/render/rasterizer.h"

namespace binpose::estimator {

using geometry::Mat3;
using geometry::Vec3;

Pose SolveRigidAlignment(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  if (src.size() != dst.size() || src.size() < 3) {
    throw RefinementError("rigid alignment needs at least three correspondences");
  }
  Vec3 mu_s = Vec3::Zero(), mu_d = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    mu_s += src[i];
    mu_d += dst[i];
  }
  mu_s /= static_cast<double>(src.size());
  mu_d /= static_cast<double>(dst.size());
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    h += (src[i] - mu_s) * (dst[i] - mu_d).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();
  return Pose::FromMatrix(r, mu_d - r * mu_s);
}

namespace {

// Closest point on triangle abc to p (Voronoi-region walk).
Vec3 ClosestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

struct SurfaceTriangle {
  Vec3 a, b, c;
  Vec3 normal;
  Vec3 centre;
  double radius;
};

SurfaceTriangle MakeSurfaceTriangle(const geometry::TriangleMesh& mesh, int k) {
  const auto& tri = mesh.triangles[k];
  SurfaceTriangle s;
  s.a = mesh.vertices[tri[0]];
  s.b = mesh.vertices[tri[1]];
  s.c = mesh.vertices[tri[2]];
  const Vec3 n = (s.b - s.a).cross(s.c - s.a);
  s.normal = n.norm() > 0.0 ? Vec3(n.normalized()) : Vec3::Zero();
  s.centre = (s.a + s.b + s.c) / 3.0;
  s.radius = std::max({(s.a - s.centre).norm(), (s.b - s.centre).norm(),
                       (s.c - s.centre).norm()});
  return s;
}

// Closest-point matches of observed points against a fixed set of triangles.
class SurfaceMatcher {
 public:
  SurfaceMatcher(const geometry::TriangleMesh& mesh, const std::vector<Vec3>& obs)
      : mesh_(mesh), obs_(obs), matched(obs.size()), normals(obs.size()) {}

  // Returns true if any triangle was new.
  bool Add(const std::vector<int>& triangles) {
    bool grew = false;
    for (int k : triangles) {
      if (!used_.insert(k).second) continue;
      surface_.push_back(MakeSurfaceTriangle(mesh_, k));
      grew = true;
    }
    return grew;
  }

  bool empty() const { return surface_.empty(); }

  // RMS distance; fills `matched` / `normals` in the object frame.
  double Match(const Pose& p) {
    const Pose inv = p.inverse();
    const Mat3 r = inv.rotation_matrix();
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < obs_.size(); ++i) {
      const Vec3 q = r * obs_[i] + inv.translation();
      double best = std::numeric_limits<double>::infinity();
      for (const SurfaceTriangle& s : surface_) {
        const double lower = (q - s.centre).norm() - s.radius;
        if (lower > 0.0 && lower * lower >= best) continue;
        const Vec3 x = ClosestPointOnTriangle(q, s.a, s.b, s.c);
        const double d2 = (q - x).squaredNorm();
        if (d2 < best) {
          best = d2;
          matched[i] = x;
          // Gradient of the distance; the face normal only where it vanishes.
          normals[i] = d2 > 1e-24 ? Vec3((q - x) / std::sqrt(d2)) : s.normal;
        }
      }
      sum_sq += best;
    }
    return std::sqrt(sum_sq / static_cast<double>(obs_.size()));
  }

  std::vector<Vec3> Transformed(const Pose& p) const {
    std::vector<Vec3> out(matched.size());
    for (std::size_t i = 0; i < matched.size(); ++i) out[i] = p * matched[i];
    return out;
  }

 private:
  const geometry::TriangleMesh& mesh_;
  const std::vector<Vec3>& obs_;
  std::vector<SurfaceTriangle> surface_;
  std::set<int> used_;

 public:
  std::vector<Vec3> matched;
  std::vector<Vec3> normals;
};

// One Gauss-Newton step on the point-to-surface distance about the current
// matches. Directions the data leave unconstrained get no update.
std::optional<Pose> PointToPlaneStep(const Pose& pose, const SurfaceMatcher& m,
                                     const std::vector<Vec3>& obs) {
  const Mat3 r = pose.rotation_matrix();
  Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const Vec3 x = r * m.matched[i] + pose.translation();
    const Vec3 n = r * m.normals[i];
    Eigen::Matrix<double, 6, 1> j;
    j << x.cross(n), n;
    a += j * j.transpose();
    b -= j * n.dot(x - obs[i]);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues()(0) > 0.0)) return std::nullopt;
  svd.setThreshold(1e-10);
  const Eigen::Matrix<double, 6, 1> xi = svd.solve(b);
  if (!xi.allFinite()) return std::nullopt;
  const Vec3 w = xi.head<3>();
  const double angle = w.norm();
  const geometry::Quat dq =
      angle > 0.0 ? geometry::Quat(Eigen::AngleAxisd(angle, w / angle))
                  : geometry::Quat::Identity();
  // Rotate about the camera origin, then translate.
  return Pose(dq, xi.tail<3>()) * pose;
}

}  // namespace

Prediction IcpRefine(const Pose& init, const geometry::ObjectModel& model,
                     const geometry::PointCloud& observed,
                     const geometry::CameraIntrinsics& cam, const IcpOptions& options,
                     std::vector<double>* residual_trace) {
  const geometry::PointCloud obs =
      geometry::StrideSubsample(observed, options.max_observed_points);
  if (obs.size() < 3) throw RefinementError("ICP: fewer than three observed points");

  SurfaceMatcher matcher(model.mesh, obs.points);
  matcher.Add(render::VisibleTriangles(model.mesh, init, cam));
  if (matcher.empty()) throw RefinementError("ICP: model not visible at the initial pose");

  Pose pose = init;
  double residual = matcher.Match(pose);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (residual_trace) residual_trace->push_back(residual);
    const std::vector<Vec3> before = matcher.matched;
    const std::vector<Vec3> before_normals = matcher.normals;

    Pose next = pose;
    double next_residual = residual;
    bool accepted = false;
    if (const auto p2p = PointToPlaneStep(pose, matcher, obs.points)) {
      next_residual = matcher.Match(*p2p);
      if (next_residual < residual) {
        next = *p2p;
        accepted = true;
      }
    }
    if (!accepted) {
      // Closed-form fallback: never increases the residual.
      matcher.matched = before;
      matcher.normals = before_normals;
      next = SolveRigidAlignment(matcher.matched, obs.points);
      next_residual = matcher.Match(next);
      // Stalling often means faces that are in view now are missing.
      if (matcher.Add(render::VisibleTriangles(model.mesh, next, cam))) {
        next_residual = matcher.Match(next);
      }
    }
    const Pose delta = next * pose.inverse();
    pose = next;
    residual = next_residual;
    const double step = geometry::RotationAngle(delta.rotation(), geometry::Quat::Identity()) +
                        delta.translation().norm();
    if (step < options.tolerance) {
      // Faces that only came into view while moving join the surface.
      if (!matcher.Add(render::VisibleTriangles(model.mesh, pose, cam))) break;
      residual = matcher.Match(pose);
    }
  }
  if (residual_trace) residual_trace->push_back(residual);
  return {pose, residual};
}

}  // namespace binpose::estimator
