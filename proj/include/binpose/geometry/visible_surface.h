#pragma once

#include "binpose/geometry/camera.h"
#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"

namespace binpose::geometry {

/// Surface of `model` seen from the camera at `pose`: one back-projected
/// point per pixel covered by the rasterized depth buffer, in camera frame,
/// row-major pixel order. Throws EmptyProjectionError when nothing is
/// covered.
PointCloud VisibleSurfacePoints(const ObjectModel& model, const Pose& pose,
                                const CameraIntrinsics& cam);

}  // namespace binpose::geometry
