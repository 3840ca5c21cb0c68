#pragma once

#include <vector>

#include "binpose/geometry/pose.h"

namespace binpose::geometry {

inline constexpr int kAnchorCount = 60;

/// The 60 rotations of the icosahedral group (zero translation), identity
/// first. Order is fixed across calls.
const std::vector<Pose>& IcosahedralRotationAnchors();

}  // namespace binpose::geometry
