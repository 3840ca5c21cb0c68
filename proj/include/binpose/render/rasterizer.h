#pragma once

#include <optional>
#include <span>
#include <vector>

#include "binpose/geometry/camera.h"
#include "binpose/geometry/object_model.h"
#include "binpose/geometry/pose.h"
#include "binpose/render/image.h"

namespace binpose::render {

using geometry::CameraIntrinsics;
using geometry::ObjectModel;
using geometry::Pose;
using geometry::TriangleMesh;
using geometry::Vec3;

inline constexpr double kNearPlane = 1e-4;

/// Directional light for flat Lambertian shading. `direction` points from
/// the surface towards the light, in camera coordinates.
struct LightSpec {
  Vec3 direction = Vec3(-0.3, -0.4, -0.8660254037844386).normalized();
  double ambient = 0.25;
  Vec3 albedo = Vec3(0.7, 0.7, 0.7);

  /// Throws PreconditionError on a non-unit direction or out-of-range values.
  void Validate() const;
};

struct RenderOutput {
  ColorImage image;
  Mask mask;
  DepthMap depth;
};

/// Renders one mesh. Objects outside the frustum give an all-zero mask.
RenderOutput Render(const ObjectModel& model, const Pose& pose,
                    const CameraIntrinsics& cam, const LightSpec& light);

/// Depth-only render of a mesh (no shading).
DepthMap RenderDepth(const TriangleMesh& mesh, const Pose& pose,
                     const CameraIntrinsics& cam);

/// Indices of the triangles that win at least one pixel, ascending.
std::vector<int> VisibleTriangles(const TriangleMesh& mesh, const Pose& pose,
                                  const CameraIntrinsics& cam);

struct RenderInstance {
  const TriangleMesh* mesh = nullptr;
  Pose pose;
  /// Overrides the light's albedo for this instance.
  std::optional<Vec3> albedo;
};

struct SceneRenderOutput {
  RenderOutput combined;
  /// Pixels where instance i wins the joint depth test.
  std::vector<Mask> instance_masks;
};

/// Joint z-buffer over all instances. Ties go to the lower instance index.
SceneRenderOutput RenderScene(std::span<const RenderInstance> instances,
                              const CameraIntrinsics& cam, const LightSpec& light);

}  // namespace binpose::render
