#include "binpose/losses/losses.h"

#include <cmath>
#include <limits>

#include "binpose/errors.h"
#include "binpose/geometry/kd_tree.h"

namespace binpose::losses {

namespace {

void RequirePoints(const PointCloud& pts) {
  if (pts.empty()) throw PreconditionError("ShapeMatch: empty model point set");
}

}  // namespace

double ShapeMatchSymmetric(const Quat& r_pseudo, const Quat& r_pred,
                           const PointCloud& model_points) {
  RequirePoints(model_points);
  const PointCloud target = ApplyPose(Pose(r_pred, Vec3::Zero()), model_points);
  const PointCloud source = ApplyPose(Pose(r_pseudo, Vec3::Zero()), model_points);
  const geometry::KdTree tree(target.points);
  double sum = 0.0;
  for (const Vec3& p : source.points) sum += std::sqrt(tree.Nearest(p).distance_sq);
  return sum / static_cast<double>(model_points.size());
}

double ShapeMatchAsymmetric(const Quat& r_pseudo, const Quat& r_pred,
                            const PointCloud& model_points) {
  RequirePoints(model_points);
  const geometry::Mat3 a = r_pseudo.toRotationMatrix();
  const geometry::Mat3 b = r_pred.toRotationMatrix();
  double sum = 0.0;
  for (const Vec3& x : model_points.points) sum += (a * x - b * x).norm();
  return sum / static_cast<double>(model_points.size());
}

double ShapeMatch(const Quat& r_pseudo, const Quat& r_pred, const ObjectModel& model) {
  return model.symmetric ? ShapeMatchSymmetric(r_pseudo, r_pred, model.model_points)
                         : ShapeMatchAsymmetric(r_pseudo, r_pred, model.model_points);
}

// With y = R_pred x2 and r = R_pseudo x1 - exp(w) y, dr/dw = [y]_x at w = 0,
// so d|r|/dw = [y]_x^T r / |r| = (r x y) / |r|.
Vec3 ShapeMatchAsymmetricGradient(const Quat& r_pseudo, const Quat& r_pred,
                                  const PointCloud& model_points) {
  RequirePoints(model_points);
  const geometry::Mat3 a = r_pseudo.toRotationMatrix();
  const geometry::Mat3 b = r_pred.toRotationMatrix();
  Vec3 grad = Vec3::Zero();
  for (const Vec3& x : model_points.points) {
    const Vec3 y = b * x;
    const Vec3 r = a * x - y;
    const double n = r.norm();
    if (n > 0.0) grad += r.cross(y) / n;
  }
  return grad / static_cast<double>(model_points.size());
}

Vec3 ShapeMatchSymmetricGradient(const Quat& r_pseudo, const Quat& r_pred,
                                 const PointCloud& model_points) {
  RequirePoints(model_points);
  const PointCloud target = ApplyPose(Pose(r_pred, Vec3::Zero()), model_points);
  const PointCloud source = ApplyPose(Pose(r_pseudo, Vec3::Zero()), model_points);
  const geometry::KdTree tree(target.points);
  Vec3 grad = Vec3::Zero();
  for (const Vec3& p : source.points) {
    const Vec3& y = target.points[tree.Nearest(p).index];
    const Vec3 r = p - y;
    const double n = r.norm();
    if (n > 0.0) grad += r.cross(y) / n;
  }
  return grad / static_cast<double>(model_points.size());
}

double ProbabilisticRotationLoss(std::span<const AnchorTerm> anchors, double diameter) {
  if (!(diameter > 0.0)) throw PreconditionError("rotation loss: diameter must be > 0");
  double total = 0.0;
  for (const AnchorTerm& a : anchors) {
    if (!(a.sigma > 0.0)) throw PreconditionError("rotation loss: sigma must be > 0");
    total += std::log(a.sigma) + a.shape_match / (diameter * a.sigma);
  }
  return total;
}

CenterVectorField CenterVectors(const Vec3& center, const PointCloud& points) {
  CenterVectorField field;
  field.vectors.reserve(points.size());
  for (const Vec3& x : points.points) {
    const Vec3 d = center - x;
    const double n = d.norm();
    if (!(n > 1e-12)) throw PreconditionError("CenterVectors: point at the centre");
    field.vectors.push_back(d / n);
  }
  return field;
}

double TranslationVectorLoss(const CenterVectorField& pseudo,
                             const CenterVectorField& pred, double delta) {
  if (pseudo.size() != pred.size()) {
    throw PreconditionError("TranslationVectorLoss: field lengths differ");
  }
  if (pseudo.size() == 0) throw PreconditionError("TranslationVectorLoss: empty fields");
  if (!(delta > 0.0)) throw PreconditionError("TranslationVectorLoss: delta must be > 0");
  double sum = 0.0;
  for (std::size_t j = 0; j < pseudo.size(); ++j) {
    const double d = (pseudo.vectors[j] - pred.vectors[j]).norm();
    sum += d < delta ? 0.5 * d * d / delta : d - 0.5 * delta;
  }
  return sum / static_cast<double>(pseudo.size());
}

void LossConfig::Validate() const {
  if (!(rotation_weight >= 0.0) || !(translation_weight >= 0.0)) {
    throw ConfigError("loss_config: weights must be non-negative");
  }
  if (!(smooth_l1_delta > 0.0)) throw ConfigError("loss_config: smooth_l1_delta must be > 0");
}

LossConfig LossConfig::FromJson(const nlohmann::json& j) {
  LossConfig c;
  if (!j.is_object()) throw ConfigError("loss_config must be an object");
  try {
    c.rotation_weight = j.value("rotation_weight", c.rotation_weight);
    c.translation_weight = j.value("translation_weight", c.translation_weight);
    c.smooth_l1_delta = j.value("smooth_l1_delta", c.smooth_l1_delta);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("loss_config: ") + e.what());
  }
  c.Validate();
  return c;
}

nlohmann::json LossConfig::ToJson() const {
  return {{"rotation_weight", rotation_weight},
          {"translation_weight", translation_weight},
          {"smooth_l1_delta", smooth_l1_delta}};
}

double InstanceLoss(const Pose& pseudo, const Pose& pred, const ObjectModel& model,
                    const LossConfig& config) {
  const double rot = ShapeMatch(pseudo.rotation(), pred.rotation(), model);
  const PointCloud placed = ApplyPose(pseudo, model.model_points);
  const double trans =
      TranslationVectorLoss(CenterVectors(pseudo.translation(), placed),
                            CenterVectors(pred.translation(), placed),
                            config.smooth_l1_delta);
  return config.rotation_weight * rot + config.translation_weight * trans;
}

SelfTrainingLoss ComputeSelfTrainingLoss(std::span<const Pose> pseudo,
                                         std::span<const Pose> pred,
                                         std::span<const ObjectModel* const> models,
                                         const LossConfig& config) {
  if (pseudo.size() != pred.size() || pseudo.size() != models.size()) {
    throw PreconditionError("self-training loss: list lengths differ");
  }
  if (pseudo.empty()) return {0.0, true};
  double sum = 0.0;
  for (std::size_t i = 0; i < pseudo.size(); ++i) {
    sum += InstanceLoss(pseudo[i], pred[i], *models[i], config);
  }
  return {sum / static_cast<double>(pseudo.size()), false};
}

}  // namespace binpose::losses
