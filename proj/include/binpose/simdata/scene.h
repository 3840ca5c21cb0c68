#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "binpose/geometry/camera.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"
#include "binpose/render/image.h"

namespace binpose::simdata {

using geometry::CameraIntrinsics;
using geometry::Pose;
using geometry::Vec3;

/// Open box the objects are dropped into. The bin frame has its origin at
/// the floor centre with +z pointing up out of the bin.
struct BinSpec {
  Vec3 extents = Vec3(0.24, 0.18, 0.12);  ///< interior x, y, z (metres)
  double wall_thickness = 0.01;
  /// Bin frame -> camera frame. Default: camera 0.5 m above the floor
  /// centre, looking straight down.
  Pose camera_from_bin = Pose::FromMatrix(
      (geometry::Mat3() << 1, 0, 0, 0, -1, 0, 0, 0, -1).finished(), Vec3(0, 0, 0.5));
  int min_instances = 5;
  int max_instances = 10;

  /// Throws PreconditionError on non-positive extents, a bad instance range,
  /// or a bin corner that does not project inside the image.
  void Validate(const CameraIntrinsics& cam) const;
  static BinSpec FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

/// Corruptions that turn a synthetic scene into a "real-like" one.
struct ShiftSpec {
  double depth_noise_sigma = 0.0;  ///< metres
  double depth_dropout = 0.0;      ///< per-pixel probability
  int mask_erosion_radius = 0;     ///< pixels, square structuring element
  double brightness_min = 0.0, brightness_max = 0.0;  ///< additive, [0,1] units
  double contrast_min = 1.0, contrast_max = 1.0;      ///< multiplicative about 0.5
  /// Applied at render time by the dataset generator, not by DomainShift.
  double light_jitter_deg = 0.0;

  void Validate() const;
  bool IsIdentity() const;
  static ShiftSpec FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

/// One captured bin. Ground-truth poses may be withheld (the "real" splits);
/// training-facing code then gets AccessError from labels().
class Scene {
 public:
  std::string scene_id;
  std::uint64_t seed = 0;
  CameraIntrinsics intrinsics;
  render::ColorImage8 image;
  render::DepthMm depth;
  std::vector<render::Mask> masks;      ///< one per instance
  std::vector<std::string> object_ids;  ///< one per instance

  std::size_t instance_count() const { return masks.size(); }
  bool has_labels() const { return labels_.has_value(); }
  /// Throws AccessError when the labels are withheld.
  const std::vector<Pose>& labels() const;
  void set_labels(std::vector<Pose> poses) { labels_ = std::move(poses); }
  void withhold_labels() { labels_.reset(); }

  /// Depth converted to metres.
  render::DepthMap DepthMeters() const;

  bool operator==(const Scene&) const = default;

 private:
  std::optional<std::vector<Pose>> labels_;
};

/// Withheld poses, keyed by scene id; consulted only by evaluation.
using GroundTruthStore = std::map<std::string, std::vector<Pose>>;

/// One point per masked pixel with depth > 0:
/// ((u + 0.5 - cx) z / fx, (v + 0.5 - cy) z / fy, z).
/// Throws PreconditionError if the buffers disagree in size.
geometry::PointCloud Backproject(const render::DepthMap& depth,
                                 const CameraIntrinsics& intrinsics,
                                 const render::Mask& mask);

}  // namespace binpose::simdata
