#pragma once

#include <string>
#include <vector>

#include "binpose/estimator/descriptor.h"
#include "binpose/render/image.h"
#include "binpose/simdata/scene.h"

namespace binpose::pipeline {

struct InstanceRef {
  std::string scene_id;
  int instance = 0;
  std::string object_id;
};

/// Crops of one split. Instances too small to crop keep their InstanceRef but
/// have no crop (crop_index < 0).
struct SplitCrops {
  std::vector<InstanceRef> instances;
  std::vector<int> crop_index;  ///< per instance, into `crops`
  std::vector<estimator::Crop> crops;
  std::vector<int> scene_index;  ///< per instance, into `images`
  /// Whole-scene float images, one per scene, for scoring.
  std::vector<render::ColorImage> images;
  std::vector<const render::Mask*> masks;  ///< per instance, full-image mask
};

/// Mask window padded by `padding`, clipped to the image. The cloud is the
/// backprojection of the masked depth. Returns false (and leaves `out`
/// untouched) when the mask has fewer than `min_pixels` pixels or no valid
/// depth.
bool MakeCrop(const simdata::Scene& scene, const render::ColorImage& image,
              const render::DepthMap& depth, int instance, int padding, int min_pixels,
              estimator::Crop& out);

/// Only instances of `object_ids` are kept (all when empty). The scenes must
/// outlive the result (masks are referenced).
SplitCrops ExtractCrops(const std::vector<const simdata::Scene*>& scenes,
                        const std::vector<std::string>& object_ids, int padding,
                        int min_pixels);

}  // namespace binpose::pipeline
