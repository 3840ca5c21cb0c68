#include "binpose/geometry/pose.h"

#include <cmath>

#include "binpose/errors.h"

namespace binpose::geometry {

Quat CanonicalQuaternion(Quat q) {
  bool flip = q.w() < 0.0;
  if (q.w() == 0.0) {
    if (q.x() != 0.0) {
      flip = q.x() < 0.0;
    } else if (q.y() != 0.0) {
      flip = q.y() < 0.0;
    } else {
      flip = q.z() < 0.0;
    }
  }
  if (flip) q.coeffs() = -q.coeffs();
  return q;
}

Pose::Pose() : rotation_(Quat::Identity()), translation_(Vec3::Zero()) {}

Pose::Pose(const Quat& rotation, const Vec3& translation)
    : translation_(translation) {
  const double n = rotation.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw PreconditionError("Pose: rotation quaternion is zero or non-finite");
  }
  if (!translation.allFinite()) {
    throw PreconditionError("Pose: translation is non-finite");
  }
  // Already-unit input keeps its exact bits so stored poses round-trip.
  rotation_ = CanonicalQuaternion(
      std::abs(n - 1.0) <= 1e-14 ? rotation : Quat(rotation.coeffs() / n));
}

Pose Pose::FromMatrix(const Mat3& rotation, const Vec3& translation) {
  return Pose(Quat(rotation), translation);
}

Pose Pose::FromTranslation(const Vec3& translation) {
  return Pose(Quat::Identity(), translation);
}

Pose Pose::FromAxisAngle(const Vec3& axis, double angle_rad,
                         const Vec3& translation) {
  return Pose(Quat(Eigen::AngleAxisd(angle_rad, axis.normalized())),
              translation);
}

Pose Pose::FromRotationVector(const Vec3& rotvec, const Vec3& translation) {
  const double angle = rotvec.norm();
  if (angle < 1e-300) return Pose(Quat::Identity(), translation);
  return Pose(Quat(Eigen::AngleAxisd(angle, rotvec / angle)), translation);
}

Pose Pose::operator*(const Pose& b) const {
  return Pose(rotation_ * b.rotation_, rotation_ * b.translation_ + translation_);
}

Pose Pose::inverse() const {
  const Quat inv = rotation_.conjugate();
  return Pose(inv, -(inv * translation_));
}

Pose Compose(const Pose& a, const Pose& b) { return a * b; }

double RotationAngle(const Quat& a, const Quat& b) {
  const double d = std::abs(a.normalized().dot(b.normalized()));
  return 2.0 * std::acos(std::min(1.0, d));
}

Mat3 Skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return m;
}

Mat3 ExpSO3(const Vec3& rotvec) {
  const double theta = rotvec.norm();
  if (theta < 1e-300) return Mat3::Identity();
  return Eigen::AngleAxisd(theta, rotvec / theta).toRotationMatrix();
}

}  // namespace binpose::geometry
