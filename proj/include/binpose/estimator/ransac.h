#pragma once

#include <cstdint>

#include "binpose/geometry/point_cloud.h"
#include "binpose/losses/losses.h"

namespace binpose::estimator {

using geometry::PointCloud;
using geometry::Vec3;

struct RansacOptions {
  int iterations = 64;
  double inlier_tolerance = 0.005;  ///< metres, point-to-ray distance
  std::uint64_t seed = 1;
};

/// Robust intersection of the rays x_i + s v_i. Each hypothesis is the
/// midpoint of closest approach of a random ray pair; the hypothesis with the
/// most rays within `inlier_tolerance` wins and the result is the
/// least-squares point of its inlier rays.
///
/// Throws PreconditionError with fewer than two points or mismatched sizes,
/// DegenerateGeometryError when every ray pair is near-parallel (< 1e-3 rad).
Vec3 RansacCenterVote(const PointCloud& points, const losses::CenterVectorField& vectors,
                      const RansacOptions& options = {});

/// Point minimising the summed squared distance to the given lines.
Vec3 LeastSquaresRayIntersection(const PointCloud& points,
                                 const losses::CenterVectorField& vectors);

}  // namespace binpose::estimator
