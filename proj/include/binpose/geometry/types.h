#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace binpose::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using Vec6 = Eigen::Matrix<double, 6, 1>;

}  // namespace binpose::geometry
