#pragma once

#include "binpose/geometry/types.h"

namespace binpose::geometry {

/// Pinhole intrinsics. Pixel (u, v) has its centre at (u + 0.5, v + 0.5) with
/// the origin at the top-left image corner.
struct CameraIntrinsics {
  double fx = 200.0;
  double fy = 200.0;
  double cx = 80.0;
  double cy = 60.0;
  int width = 160;
  int height = 120;

  /// Throws PreconditionError unless fx, fy > 0 and the principal point lies
  /// inside the image.
  void Validate() const;

  /// Continuous image coordinates of a camera-frame point (z > 0).
  Eigen::Vector2d Project(const Vec3& p) const {
    return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
  }

  /// Ray through the centre of pixel (u, v), scaled so that z = 1.
  Vec3 PixelRay(int u, int v) const {
    return {(u + 0.5 - cx) / fx, (v + 0.5 - cy) / fy, 1.0};
  }

  bool operator==(const CameraIntrinsics&) const = default;
};

}  // namespace binpose::geometry
