#pragma once

#include "binpose/geometry/camera.h"
#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"
#include "binpose/render/image.h"
#include "binpose/render/rasterizer.h"
#include "binpose/selection/perceptual.h"
#include "binpose/selection/scores.h"

namespace binpose::selection {

/// Chamfer distance between the surface visible at `pred` and the observed
/// cloud. Returns kSentinelDistance when the model covers no pixel.
/// Throws PreconditionError if `observed_cloud` is empty.
double GeometryDistance(const geometry::Pose& pred, const geometry::ObjectModel& model,
                        const geometry::PointCloud& observed_cloud,
                        const geometry::CameraIntrinsics& cam);

/// What the sensor saw for one instance, in full-image coordinates.
struct Observation {
  const render::ColorImage* image = nullptr;  ///< whole scene image
  const render::Mask* mask = nullptr;         ///< instance mask
  const geometry::PointCloud* cloud = nullptr;
};

struct ScoringOptions {
  /// Pixels added around the union of the two mask bounding boxes.
  int window_padding = 4;
  render::LightSpec light;
};

/// Renders `pred` and computes all four selection scores. The 2D metrics are
/// evaluated on a window around both masks; the observed image is restricted
/// to the instance mask so neighbouring objects do not enter d_image.
SelectionScores ScorePrediction(const geometry::Pose& pred,
                                const geometry::ObjectModel& model,
                                const Observation& observation,
                                const geometry::CameraIntrinsics& cam,
                                const FeatureExtractor& extractor,
                                const ScoringOptions& options = {});

}  // namespace binpose::selection
