#pragma once

#include <cstdint>

#include "binpose/render/image.h"
#include "binpose/simdata/scene.h"

namespace binpose::simdata {

/// Square erosion; pixels outside the image count as background.
render::Mask ErodeMask(const render::Mask& mask, int radius);

/// Applies per-scene brightness/contrast, per-pixel depth noise (rounded to
/// millimetres) and dropout, and mask erosion. The scene's labels are copied
/// unchanged into `withheld` and removed from the returned scene. Throws
/// AccessError if the input has no labels.
Scene DomainShift(const Scene& scene, const ShiftSpec& spec, std::uint64_t seed,
                  GroundTruthStore& withheld);

}  // namespace binpose::simdata
