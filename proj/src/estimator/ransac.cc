#include "binpose/estimator/ransac.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "binpose/errors.h"

namespace binpose::estimator {

namespace {

const double kParallelCos = std::cos(1e-3);

bool NearParallel(const Vec3& a, const Vec3& b) {
  return std::abs(a.dot(b)) > kParallelCos;
}

double LineDistance(const Vec3& p, const Vec3& origin, const Vec3& dir) {
  const Vec3 d = p - origin;
  return (d - d.dot(dir) * dir).norm();
}

Vec3 ClosestApproachMidpoint(const Vec3& p1, const Vec3& d1, const Vec3& p2,
                             const Vec3& d2) {
  const Vec3 w0 = p1 - p2;
  const double b = d1.dot(d2), d = d1.dot(w0), e = d2.dot(w0);
  const double denom = 1.0 - b * b;
  const double s = (b * e - d) / denom;
  const double u = (e - b * d) / denom;
  return 0.5 * ((p1 + s * d1) + (p2 + u * d2));
}

}  // namespace

Vec3 LeastSquaresRayIntersection(const PointCloud& points,
                                 const losses::CenterVectorField& vectors) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Vec3 b = Vec3::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& v = vectors.vectors[i];
    const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - v * v.transpose();
    a += proj;
    b += proj * points[i];
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < 3) throw DegenerateGeometryError("ray intersection is under-determined");
  return lu.solve(b);
}

Vec3 RansacCenterVote(const PointCloud& points, const losses::CenterVectorField& vectors,
                      const RansacOptions& options) {
  const std::size_t n = points.size();
  if (n < 2) throw PreconditionError("RansacCenterVote: need at least two points");
  if (vectors.size() != n) throw PreconditionError("RansacCenterVote: size mismatch");

  bool any_pair = false;
  for (std::size_t i = 1; i < n && !any_pair; ++i) {
    any_pair = !NearParallel(vectors.vectors[0], vectors.vectors[i]);
  }
  if (!any_pair) throw DegenerateGeometryError("RansacCenterVote: all rays are parallel");

  auto count_inliers = [&](const Vec3& h) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (LineDistance(h, points[k], vectors.vectors[k]) < options.inlier_tolerance) ++c;
    }
    return c;
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  bool have = false;
  Vec3 best = Vec3::Zero();
  std::size_t best_count = 0;
  for (int it = 0; it < options.iterations; ++it) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j || NearParallel(vectors.vectors[i], vectors.vectors[j])) continue;
    const Vec3 h = ClosestApproachMidpoint(points[i], vectors.vectors[i], points[j],
                                           vectors.vectors[j]);
    const std::size_t c = count_inliers(h);
    if (!have || c > best_count) {
      have = true;
      best = h;
      best_count = c;
    }
  }
  if (!have) {
    // Every sampled pair was parallel; fall back to the first usable pair.
    for (std::size_t j = 1; j < n; ++j) {
      if (!NearParallel(vectors.vectors[0], vectors.vectors[j])) {
        best = ClosestApproachMidpoint(points[0], vectors.vectors[0], points[j],
                                       vectors.vectors[j]);
        break;
      }
    }
  }

  PointCloud inlier_points;
  losses::CenterVectorField inlier_vectors;
  for (std::size_t k = 0; k < n; ++k) {
    if (LineDistance(best, points[k], vectors.vectors[k]) < options.inlier_tolerance) {
      inlier_points.points.push_back(points[k]);
      inlier_vectors.vectors.push_back(vectors.vectors[k]);
    }
  }
  if (inlier_points.size() < 2) return best;
  try {
    return LeastSquaresRayIntersection(inlier_points, inlier_vectors);
  } catch (const DegenerateGeometryError&) {
    return best;
  }
}

}  // namespace binpose::estimator
