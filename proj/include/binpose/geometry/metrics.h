#pragma once

#include <span>
#include <utility>

#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"

namespace binpose::geometry {

/// Symmetric Chamfer distance: mean nearest-neighbour distance from a to b
/// plus mean nearest-neighbour distance from b to a (not squared).
/// Throws PreconditionError if either cloud is empty.
double ChamferDistance(const PointCloud& a, const PointCloud& b);

/// Mean distance between corresponding model points under the two poses.
double AddDistance(const Pose& pred, const Pose& gt, const ObjectModel& model);

/// Mean over predicted model points of the distance to the closest
/// ground-truth model point.
double AddSDistance(const Pose& pred, const Pose& gt, const ObjectModel& model);

/// ADD-S when the model is symmetric, ADD otherwise.
double AddOrAddS(const Pose& pred, const Pose& gt, const ObjectModel& model);

struct PosePair {
  Pose pred;
  Pose gt;
};

inline constexpr double kDefaultRecallFraction = 0.10;

/// Fraction of pairs whose ADD(-S) is strictly below fraction * diameter.
double AddRecall(std::span<const PosePair> results, const ObjectModel& model,
                 double fraction = kDefaultRecallFraction);

}  // namespace binpose::geometry
