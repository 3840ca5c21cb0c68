#include "binpose/losses/numeric_gradient.h"

#include <cmath>

#include "binpose/errors.h"

namespace binpose::losses {

geometry::Pose PerturbPose(const geometry::Pose& base, const Vec6& delta) {
  const geometry::Mat3 r = geometry::ExpSO3(delta.head<3>()) * base.rotation_matrix();
  return geometry::Pose::FromMatrix(r, base.translation() + delta.tail<3>());
}

Vec6 NumericGradient(const std::function<double(const Vec6&)>& f, const Vec6& x,
                     double h) {
  if (!(h > 0.0)) throw PreconditionError("NumericGradient: h must be > 0");
  Vec6 grad;
  for (int k = 0; k < 6; ++k) {
    Vec6 plus = x, minus = x;
    plus[k] += h;
    minus[k] -= h;
    const double fp = f(plus), fm = f(minus);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw PreconditionError("NumericGradient: non-finite loss");
    }
    grad[k] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Vec6 NumericGradient(const std::function<double(const geometry::Pose&)>& loss,
                     const geometry::Pose& base, double h) {
  return NumericGradient([&](const Vec6& d) { return loss(PerturbPose(base, d)); },
                         Vec6::Zero(), h);
}

}  // namespace binpose::losses
