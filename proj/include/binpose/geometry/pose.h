#pragma once

#include <span>
#include <vector>

#include "binpose/geometry/types.h"

namespace binpose::geometry {

/// Rigid transform x -> R x + t. The rotation is stored as a unit quaternion
/// with a non-negative scalar part, so two equal rotations compare equal
/// coefficient-wise.
class Pose {
 public:
  Pose();
  /// Normalizes `rotation`. Throws PreconditionError on a zero or non-finite
  /// quaternion or a non-finite translation.
  Pose(const Quat& rotation, const Vec3& translation);

  static Pose Identity() { return Pose(); }
  static Pose FromMatrix(const Mat3& rotation, const Vec3& translation);
  static Pose FromTranslation(const Vec3& translation);
  static Pose FromAxisAngle(const Vec3& axis, double angle_rad,
                            const Vec3& translation = Vec3::Zero());
  /// Rotation vector (axis * angle) form.
  static Pose FromRotationVector(const Vec3& rotvec,
                                 const Vec3& translation = Vec3::Zero());

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Vec3 operator*(const Vec3& x) const { return rotation_ * x + translation_; }
  /// Composition: (a * b) x = a (b x).
  Pose operator*(const Pose& b) const;
  Pose inverse() const;

  /// Exact coefficient equality.
  bool operator==(const Pose& b) const {
    return rotation_.coeffs() == b.rotation_.coeffs() && translation_ == b.translation_;
  }

 private:
  Quat rotation_;
  Vec3 translation_;
};

Pose Compose(const Pose& a, const Pose& b);

/// Geodesic angle between two rotations, radians in [0, pi].
double RotationAngle(const Quat& a, const Quat& b);

/// Flips the sign so that w >= 0 (and the first non-zero imaginary component
/// is positive when w == 0).
Quat CanonicalQuaternion(Quat q);

/// Rodrigues exponential map.
Mat3 ExpSO3(const Vec3& rotvec);

Mat3 Skew(const Vec3& v);

}  // namespace binpose::geometry
