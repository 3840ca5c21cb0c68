#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "binpose/estimator/descriptor.h"
#include "binpose/estimator/icp.h"
#include "binpose/estimator/ransac.h"
#include "binpose/geometry/anchors.h"
#include "binpose/geometry/camera.h"
#include "binpose/geometry/object_model.h"
#include "binpose/losses/losses.h"

namespace binpose::estimator {

struct EstimatorConfig {
  int top_k_anchors = 2;
  /// Nearest exemplars whose rotations seed ICP.
  int exemplar_neighbors = 4;
  std::size_t capacity = 2048;
  IcpOptions icp;
  RansacOptions ransac;
  /// Model points used when scoring anchors against a label.
  std::size_t anchor_points = 64;
  /// Softmax temperature on ShapeMatch / diameter for the anchor update.
  double anchor_temperature = 0.1;
  /// Labels re-predicted after training for the loss diagnostic.
  std::size_t diagnostic_sample = 32;
  std::uint64_t seed = 1;

  void Validate() const;
  static EstimatorConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct Exemplar {
  std::vector<double> descriptor;
  Pose pose;  ///< object pose in the camera frame
  std::string object_id;
  /// Identifies the observed instance ("scene_id/k"); empty for anonymous
  /// labels. A later label with the same source replaces this exemplar.
  std::string source;

  bool operator==(const Exemplar&) const = default;
};

/// The trainable stand-in for a pose network: an exemplar bank plus
/// log-weights over the 60 rotation anchors.
struct EstimatorState {
  EstimatorConfig config;
  std::vector<Exemplar> exemplars;
  std::vector<double> anchor_bias = std::vector<double>(geometry::kAnchorCount, 0.0);
  /// Labels offered to the reservoir so far.
  std::uint64_t seen = 0;
  /// Mean self-training loss measured by the last non-empty Train call.
  double training_loss = 0.0;

  static EstimatorState Initial(const EstimatorConfig& config);
};

using ModelTable = std::map<std::string, const geometry::ObjectModel*>;

struct LabeledCrop {
  const Crop* crop = nullptr;
  Pose pose;
  std::string object_id;
  std::string source;
};

/// Anchor indices sorted by descending bias, ties to the lower index.
std::vector<int> TopAnchors(const EstimatorState& state, int k);

/// Seeds ICP from the nearest exemplars and the top anchors, translation from
/// centre voting on the observed cloud, and returns the lowest-residual fit
/// (ties to the earlier candidate). Read-only on `state`.
Prediction Predict(const EstimatorState& state, const Crop& crop,
                   const geometry::ObjectModel& model,
                   const geometry::CameraIntrinsics& cam);

/// Returns the updated state; `state` itself is not modified. An empty
/// `labeled` list returns an identical copy.
EstimatorState Train(const EstimatorState& state, const std::vector<LabeledCrop>& labeled,
                     const ModelTable& models, const losses::LossConfig& loss_config,
                     const geometry::CameraIntrinsics& cam);

}  // namespace binpose::estimator
