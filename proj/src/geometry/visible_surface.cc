#include "binpose/geometry/visible_surface.h"

#include "binpose/errors.h"
#include "binpose/render/rasterizer.h"

namespace binpose::geometry {

PointCloud VisibleSurfacePoints(const ObjectModel& model, const Pose& pose,
                                const CameraIntrinsics& cam) {
  const render::DepthMap depth = render::RenderDepth(model.mesh, pose, cam);
  PointCloud out;
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const double z = depth.at(u, v);
      if (z > 0.0) out.points.push_back(cam.PixelRay(u, v) * z);
    }
  }
  if (out.empty()) {
    throw EmptyProjectionError("model '" + model.id + "' covers no pixel");
  }
  return out;
}

}  // namespace binpose::geometry
