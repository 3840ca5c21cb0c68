#include "binpose/selection/scoring.h"

#include <algorithm>

#include "binpose/errors.h"
#include "binpose/geometry/metrics.h"
#include "binpose/selection/mask_overlap.h"

namespace binpose::selection {

namespace {

geometry::PointCloud BackprojectDepth(const render::DepthMap& depth,
                                      const geometry::CameraIntrinsics& cam) {
  geometry::PointCloud out;
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const double z = depth.at(u, v);
      if (z > 0.0) out.points.push_back(cam.PixelRay(u, v) * z);
    }
  }
  return out;
}

render::PixelBox UnionBox(const render::PixelBox& a, const render::PixelBox& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.u0, b.u0), std::min(a.v0, b.v0), std::max(a.u1, b.u1),
          std::max(a.v1, b.v1)};
}

}  // namespace

double GeometryDistance(const geometry::Pose& pred, const geometry::ObjectModel& model,
                        const geometry::PointCloud& observed_cloud,
                        const geometry::CameraIntrinsics& cam) {
  if (observed_cloud.empty()) {
    throw PreconditionError("GeometryDistance: observed cloud is empty");
  }
  const geometry::PointCloud visible =
      BackprojectDepth(render::RenderDepth(model.mesh, pred, cam), cam);
  if (visible.empty()) return kSentinelDistance;
  return geometry::ChamferDistance(visible, observed_cloud);
}

SelectionScores ScorePrediction(const geometry::Pose& pred,
                                const geometry::ObjectModel& model,
                                const Observation& observation,
                                const geometry::CameraIntrinsics& cam,
                                const FeatureExtractor& extractor,
                                const ScoringOptions& options) {
  if (!observation.image || !observation.mask || !observation.cloud) {
    throw PreconditionError("ScorePrediction: incomplete observation");
  }
  if (observation.cloud->empty()) {
    throw PreconditionError("ScorePrediction: observed cloud is empty");
  }
  const render::Mask& obs_mask = *observation.mask;
  const render::RenderOutput ren = render::Render(model, pred, cam, options.light);

  render::PixelBox box = UnionBox(render::MaskBounds(obs_mask), render::MaskBounds(ren.mask));
  if (box.empty()) throw PreconditionError("ScorePrediction: observed mask is empty");
  const int pad = options.window_padding;
  box = {std::max(0, box.u0 - pad), std::max(0, box.v0 - pad),
         std::min(cam.width - 1, box.u1 + pad), std::min(cam.height - 1, box.v1 + pad)};

  const render::Mask ren_window = render::CropBuffer(ren.mask, box);
  const render::Mask obs_window = render::CropBuffer(obs_mask, box);
  double d_mask = 1.0;
  if (render::CountForeground(ren_window) < ren_window.size()) {
    d_mask = MaskDistance(ren_window, obs_window);
  }

  render::ColorImage obs_image = render::CropBuffer(*observation.image, box);
  for (std::size_t i = 0; i < obs_image.size(); ++i) {
    if (!obs_window.data()[i]) obs_image.data()[i] = {0.f, 0.f, 0.f};
  }
  const double d_image =
      PerceptualDistance(render::CropBuffer(ren.image, box), obs_image, extractor);

  const geometry::PointCloud visible = BackprojectDepth(ren.depth, cam);
  const double d_g = visible.empty()
                         ? kSentinelDistance
                         : geometry::ChamferDistance(visible, *observation.cloud);
  return MakeScores(d_mask, d_image, d_g);
}

}  // namespace binpose::selection
