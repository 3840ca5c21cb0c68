#pragma once

#include <functional>

#include "binpose/geometry/pose.h"
#include "binpose/geometry/types.h"

namespace binpose::losses {

using geometry::Vec6;

/// Local chart around a pose: the first three entries are a rotation vector
/// applied on the left of the rotation, the last three are added to the
/// translation.
geometry::Pose PerturbPose(const geometry::Pose& base, const Vec6& delta);

/// Central differences (f(x + h e_k) - f(x - h e_k)) / 2h. Throws
/// PreconditionError if h <= 0 or any evaluation is non-finite.
Vec6 NumericGradient(const std::function<double(const Vec6&)>& f, const Vec6& x,
                     double h);

/// Gradient of a pose functional in the local chart at `base`.
Vec6 NumericGradient(const std::function<double(const geometry::Pose&)>& loss,
                     const geometry::Pose& base, double h);

}  // namespace binpose::losses
