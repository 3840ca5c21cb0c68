#include "binpose/geometry/metrics.h"

#include <cmath>

#include "binpose/errors.h"
#include "binpose/geometry/kd_tree.h"

namespace binpose::geometry {

namespace {

double MeanNearestDistance(const PointCloud& from, const KdTree& to) {
  double sum = 0.0;
  for (const Vec3& p : from.points) sum += std::sqrt(to.Nearest(p).distance_sq);
  return sum / static_cast<double>(from.size());
}

void RequirePoints(const ObjectModel& model) {
  if (model.model_points.empty()) {
    throw PreconditionError("ADD: model has no model points");
  }
}

}  // namespace

double ChamferDistance(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) {
    throw PreconditionError("ChamferDistance: empty point cloud");
  }
  const KdTree tree_a(a.points);
  const KdTree tree_b(b.points);
  return MeanNearestDistance(a, tree_b) + MeanNearestDistance(b, tree_a);
}

double AddDistance(const Pose& pred, const Pose& gt, const ObjectModel& model) {
  RequirePoints(model);
  const Mat3 rp = pred.rotation_matrix(), rg = gt.rotation_matrix();
  double sum = 0.0;
  for (const Vec3& x : model.model_points.points) {
    sum += ((rp * x + pred.translation()) - (rg * x + gt.translation())).norm();
  }
  return sum / static_cast<double>(model.model_points.size());
}

double AddSDistance(const Pose& pred, const Pose& gt, const ObjectModel& model) {
  RequirePoints(model);
  const PointCloud pred_pts = ApplyPose(pred, model.model_points);
  const PointCloud gt_pts = ApplyPose(gt, model.model_points);
  return MeanNearestDistance(pred_pts, KdTree(gt_pts.points));
}

double AddOrAddS(const Pose& pred, const Pose& gt, const ObjectModel& model) {
  return model.symmetric ? AddSDistance(pred, gt, model)
                         : AddDistance(pred, gt, model);
}

double AddRecall(std::span<const PosePair> results, const ObjectModel& model,
                 double fraction) {
  if (results.empty()) throw PreconditionError("AddRecall: no results");
  if (!(fraction > 0.0)) throw PreconditionError("AddRecall: fraction must be > 0");
  const double threshold = fraction * model.diameter;
  std::size_t hits = 0;
  for (const PosePair& r : results) {
    if (AddOrAddS(r.pred, r.gt, model) < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

}  // namespace binpose::geometry
