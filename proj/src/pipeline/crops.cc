#include "binpose/pipeline/crops.h"

#include <algorithm>

#include "binpose/errors.h"

namespace binpose::pipeline {

bool MakeCrop(const simdata::Scene& scene, const render::ColorImage& image,
              const render::DepthMap& depth, int instance, int padding, int min_pixels,
              estimator::Crop& out) {
  if (instance < 0 || static_cast<std::size_t>(instance) >= scene.instance_count()) {
    throw PreconditionError("MakeCrop: instance index out of range");
  }
  const render::Mask& mask = scene.masks[instance];
  if (render::CountForeground(mask) < static_cast<std::size_t>(min_pixels)) return false;
  geometry::PointCloud cloud = simdata::Backproject(depth, scene.intrinsics, mask);
  if (cloud.empty()) return false;

  render::PixelBox box = render::MaskBounds(mask);
  box.u0 = std::max(0, box.u0 - padding);
  box.v0 = std::max(0, box.v0 - padding);
  box.u1 = std::min(mask.width() - 1, box.u1 + padding);
  box.v1 = std::min(mask.height() - 1, box.v1 + padding);
  out.mask = render::CropBuffer(mask, box);
  out.depth = render::CropBuffer(depth, box);
  out.image = render::CropBuffer(image, box);
  out.cloud = std::move(cloud);
  out.window = box;
  return true;
}

SplitCrops ExtractCrops(const std::vector<const simdata::Scene*>& scenes,
                        const std::vector<std::string>& object_ids, int padding,
                        int min_pixels) {
  SplitCrops out;
  for (const simdata::Scene* scene : scenes) {
    const int scene_idx = static_cast<int>(out.images.size());
    out.images.push_back(render::ToFloat(scene->image));
    const render::DepthMap depth = scene->DepthMeters();
    for (std::size_t k = 0; k < scene->instance_count(); ++k) {
      const std::string& id = scene->object_ids[k];
      if (!object_ids.empty() &&
          std::find(object_ids.begin(), object_ids.end(), id) == object_ids.end()) {
        continue;
      }
      out.instances.push_back({scene->scene_id, static_cast<int>(k), id});
      out.scene_index.push_back(scene_idx);
      out.masks.push_back(&scene->masks[k]);
      estimator::Crop crop;
      if (MakeCrop(*scene, out.images.back(), depth, static_cast<int>(k), padding, min_pixels,
                   crop)) {
        out.crop_index.push_back(static_cast<int>(out.crops.size()));
        out.crops.push_back(std::move(crop));
      } else {
        out.crop_index.push_back(-1);
      }
    }
  }
  return out;
}

}  // namespace binpose::pipeline
