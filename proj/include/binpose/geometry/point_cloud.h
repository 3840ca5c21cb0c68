#pragma once

#include <cstddef>
#include <vector>

#include "binpose/geometry/pose.h"
#include "binpose/geometry/types.h"

namespace binpose::geometry {

struct PointCloud {
  std::vector<Vec3> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Vec3& operator[](std::size_t i) const { return points[i]; }
  Vec3& operator[](std::size_t i) { return points[i]; }
  auto begin() const { return points.begin(); }
  auto end() const { return points.end(); }
};

/// output[i] = R * input[i] + t.
PointCloud ApplyPose(const Pose& pose, const PointCloud& cloud);

Vec3 Centroid(const PointCloud& cloud);

/// Keeps every k-th point so that at most `max_points` remain. Order preserved.
PointCloud StrideSubsample(const PointCloud& cloud, std::size_t max_points);

}  // namespace binpose::geometry
