#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>

#include "binpose/geometry/object_model.h"
#include "binpose/render/rasterizer.h"
#include "binpose/simdata/scene.h"

namespace binpose::simdata {

/// Uniformly distributed rotation (Shoemake's subgroup algorithm).
geometry::Quat UniformRotation(std::mt19937_64& rng);

struct SceneOptions {
  render::LightSpec light;
  /// Base albedo per object id; objects not listed use light.albedo.
  std::map<std::string, Vec3> albedo;
  /// Each instance's albedo is scaled by a factor in [1 - j, 1 + j].
  double albedo_jitter = 0.2;
  Vec3 bin_albedo = Vec3(0.45, 0.42, 0.38);
  bool render_bin = true;
  /// Allowed bounding-sphere penetration as a fraction of the radius.
  double penetration_fraction = 0.1;
  int max_rejections = 10000;
};

/// Drops instances into the bin by rejection sampling (uniform position,
/// uniform rotation, bounding spheres) and renders the scene. Deterministic
/// in `seed`. Throws CapacityError when the requested count cannot be placed
/// within `max_rejections` rejected draws.
Scene GenerateScene(std::span<const geometry::ObjectModel> models, const BinSpec& bin,
                    const CameraIntrinsics& cam, std::uint64_t seed,
                    const SceneOptions& options = {});

/// Rotates the light direction by a uniformly random angle in [0, degrees]
/// about a random axis.
render::LightSpec JitterLight(const render::LightSpec& light, double degrees,
                              std::mt19937_64& rng);

/// Interior faces of the bin (floor and four walls) in the bin frame.
geometry::TriangleMesh MakeBinMesh(const BinSpec& bin);

}  // namespace binpose::simdata
