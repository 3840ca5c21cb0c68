#pragma once

#include <vector>

#include "binpose/geometry/point_cloud.h"
#include "binpose/render/image.h"

namespace binpose::estimator {

/// Per-instance observation cut out of a scene. Buffers are crop-local; the
/// cloud is in camera coordinates.
struct Crop {
  render::Mask mask;
  render::DepthMap depth;
  render::ColorImage image;
  geometry::PointCloud cloud;
  /// Placement of the crop in the full image.
  render::PixelBox window;
};

inline constexpr int kMaskGrid = 8;
inline constexpr int kDepthBins = 16;
inline constexpr int kDescriptorLength = kMaskGrid * kMaskGrid + kDepthBins + 2;

/// 8x8 foreground fractions over the mask bounding box, a 16-bin histogram
/// of masked depth normalised by (z - min) / (max - min + eps), then the
/// masked luminance mean and variance. Throws PreconditionError on an empty
/// mask.
std::vector<double> ComputeDescriptor(const Crop& crop);

}  // namespace binpose::estimator
