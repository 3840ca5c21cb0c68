#include "binpose/geometry/camera.h"

#include "binpose/errors.h"

namespace binpose::geometry {

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0 && fy > 0.0)) {
    throw PreconditionError("CameraIntrinsics: focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw PreconditionError("CameraIntrinsics: image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw PreconditionError("CameraIntrinsics: principal point outside image");
  }
}

}  // namespace binpose::geometry
