#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"
#include "binpose/geometry/pose.h"

namespace binpose::losses {

using geometry::ObjectModel;
using geometry::PointCloud;
using geometry::Pose;
using geometry::Quat;
using geometry::Vec3;

/// (1/M) sum_{x1} min_{x2} |R_pseudo x1 - R_pred x2|. Throws
/// PreconditionError on an empty point set.
double ShapeMatchSymmetric(const Quat& r_pseudo, const Quat& r_pred,
                           const PointCloud& model_points);

/// (1/M) sum_x |R_pseudo x - R_pred x|.
double ShapeMatchAsymmetric(const Quat& r_pseudo, const Quat& r_pred,
                            const PointCloud& model_points);

/// Symmetric or asymmetric variant depending on `model.symmetric`.
double ShapeMatch(const Quat& r_pseudo, const Quat& r_pred, const ObjectModel& model);

/// Gradient of ShapeMatchAsymmetric with respect to a rotation-vector
/// perturbation w applied on the left of the prediction, R_pred <- exp(w) R_pred,
/// evaluated at w = 0.
Vec3 ShapeMatchAsymmetricGradient(const Quat& r_pseudo, const Quat& r_pred,
                                  const PointCloud& model_points);

/// Same for ShapeMatchSymmetric with the argmin correspondences frozen at the
/// current rotation.
Vec3 ShapeMatchSymmetricGradient(const Quat& r_pseudo, const Quat& r_pred,
                                 const PointCloud& model_points);

struct AnchorTerm {
  double shape_match = 0.0;  ///< L_i
  double sigma = 1.0;        ///< predicted uncertainty, > 0
};

/// sum_i ln(sigma_i) + L_i / (d * sigma_i). For fixed L_i the minimiser is
/// sigma_i = L_i / d. Throws PreconditionError on sigma <= 0 or d <= 0.
double ProbabilisticRotationLoss(std::span<const AnchorTerm> anchors, double diameter);

/// Unit vectors from each point towards an object centre.
struct CenterVectorField {
  std::vector<Vec3> vectors;
  std::size_t size() const { return vectors.size(); }
};

/// Throws PreconditionError if a point coincides with the centre.
CenterVectorField CenterVectors(const Vec3& center, const PointCloud& points);

/// Per-point smooth-L1 on the vector difference, averaged over points:
///   0.5 |d|^2 / delta    if |d| < delta
///   |d| - 0.5 delta      otherwise
/// With delta = 1 this is the usual 0.5|d|^2 / |d| - 0.5 split.
/// Throws PreconditionError on a length mismatch or empty fields.
double TranslationVectorLoss(const CenterVectorField& pseudo,
                             const CenterVectorField& pred, double delta = 1.0);

struct LossConfig {
  double rotation_weight = 1.0;
  double translation_weight = 1.0;
  double smooth_l1_delta = 1.0;

  void Validate() const;
  static LossConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

/// Rotation term plus translation term for one pseudo-labelled instance. The
/// centre-vector fields are built on the model points placed at the pseudo
/// label.
double InstanceLoss(const Pose& pseudo, const Pose& pred, const ObjectModel& model,
                    const LossConfig& config);

struct SelfTrainingLoss {
  double value = 0.0;
  /// True when the selection was empty; value is then 0.
  bool no_signal = false;
};

/// Mean of InstanceLoss over the selected instances, summed in index order.
SelfTrainingLoss ComputeSelfTrainingLoss(std::span<const Pose> pseudo,
                                         std::span<const Pose> pred,
                                         std::span<const ObjectModel* const> models,
                                         const LossConfig& config);

}  // namespace binpose::losses
