#pragma once

#include <limits>
#include <vector>

#include "binpose/geometry/camera.h"
#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"

namespace binpose::estimator {

using geometry::Pose;

inline constexpr double kFailedResidual = std::numeric_limits<double>::infinity();

struct Prediction {
  Pose pose;
  /// RMS point-to-point distance after refinement (metres);
  /// kFailedResidual when no candidate could be refined.
  double fit_residual = 0.0;
};

struct IcpOptions {
  int max_iterations = 30;
  /// Stop once the update's rotation angle (rad) plus translation (m) drops
  /// below this.
  double tolerance = 1e-6;
  std::size_t max_observed_points = 200;
};

/// Point-to-surface ICP. The model side is the set of mesh triangles visible
/// from the camera at `init`, held fixed for the whole run; every observed
/// point is matched to the closest point on those triangles and the pose is
/// re-solved in closed form (orthogonal Procrustes). Because the surface is
/// fixed the RMS residual is non-increasing, and noiseless data sampled from
/// that surface makes the true pose an exact fixed point. `residual_trace`,
/// if given, receives the residual per iteration followed by the final value.
///
/// Throws RefinementError with fewer than three observed points or when no
/// triangle is visible at `init`.
Prediction IcpRefine(const Pose& init, const geometry::ObjectModel& model,
                     const geometry::PointCloud& observed,
                     const geometry::CameraIntrinsics& cam, const IcpOptions& options = {},
                     std::vector<double>* residual_trace = nullptr);

/// Rigid transform T minimising sum |T src_i - dst_i|^2.
Pose SolveRigidAlignment(const std::vector<geometry::Vec3>& src,
                         const std::vector<geometry::Vec3>& dst);

}  // namespace binpose::estimator
