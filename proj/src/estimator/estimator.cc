#include "binpose/estimator/estimator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "binpose/errors.h"
#include "binpose/geometry/visible_surface.h"
#include "binpose/util/random.h"

namespace binpose::estimator {

using geometry::Quat;

void EstimatorConfig::Validate() const {
  if (top_k_anchors < 0 || top_k_anchors > geometry::kAnchorCount) {
    throw ConfigError("estimator: top_k_anchors must lie in [0, 60]");
  }
  if (exemplar_neighbors < 0) throw ConfigError("estimator: exemplar_neighbors must be >= 0");
  if (top_k_anchors + exemplar_neighbors == 0) {
    throw ConfigError("estimator: no rotation candidates configured");
  }
  if (capacity == 0) throw ConfigError("estimator: capacity must be positive");
  if (icp.max_iterations < 1 || !(icp.tolerance > 0.0)) {
    throw ConfigError("estimator: bad ICP settings");
  }
  if (ransac.iterations < 1 || !(ransac.inlier_tolerance > 0.0)) {
    throw ConfigError("estimator: bad RANSAC settings");
  }
  if (anchor_points == 0 || !(anchor_temperature > 0.0)) {
    throw ConfigError("estimator: bad anchor update settings");
  }
}

EstimatorConfig EstimatorConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("estimator config must be an object");
  EstimatorConfig c;
  try {
    c.top_k_anchors = j.value("top_k_anchors", c.top_k_anchors);
    c.exemplar_neighbors = j.value("exemplar_neighbors", c.exemplar_neighbors);
    c.capacity = j.value("capacity", c.capacity);
    c.icp.max_iterations = j.value("icp_max_iterations", c.icp.max_iterations);
    c.icp.tolerance = j.value("icp_tolerance", c.icp.tolerance);
    c.icp.max_observed_points = j.value("icp_max_observed_points", c.icp.max_observed_points);
    c.ransac.iterations = j.value("ransac_iterations", c.ransac.iterations);
    c.ransac.inlier_tolerance = j.value("ransac_inlier_tolerance", c.ransac.inlier_tolerance);
    c.anchor_points = j.value("anchor_points", c.anchor_points);
    c.anchor_temperature = j.value("anchor_temperature", c.anchor_temperature);
    c.diagnostic_sample = j.value("diagnostic_sample", c.diagnostic_sample);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("estimator config: ") + e.what());
  }
  c.ransac.seed = c.seed;
  c.Validate();
  return c;
}

nlohmann::json EstimatorConfig::ToJson() const {
  return {{"top_k_anchors", top_k_anchors},
          {"exemplar_neighbors", exemplar_neighbors},
          {"capacity", capacity},
          {"icp_max_iterations", icp.max_iterations},
          {"icp_tolerance", icp.tolerance},
          {"icp_max_observed_points", icp.max_observed_points},
          {"ransac_iterations", ransac.iterations},
          {"ransac_inlier_tolerance", ransac.inlier_tolerance},
          {"anchor_points", anchor_points},
          {"anchor_temperature", anchor_temperature},
          {"diagnostic_sample", diagnostic_sample},
          {"seed", seed}};
}

EstimatorState EstimatorState::Initial(const EstimatorConfig& config) {
  config.Validate();
  EstimatorState s;
  s.config = config;
  s.config.ransac.seed = config.seed;
  return s;
}

std::vector<int> TopAnchors(const EstimatorState& state, int k) {
  std::vector<int> idx(state.anchor_bias.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return state.anchor_bias[a] > state.anchor_bias[b];
  });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(k, 0))));
  return idx;
}

namespace {

double SquaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Indices of the n closest exemplars of `object_id`, nearest first, ties to the
// lower index.
std::vector<std::size_t> NearestExemplars(const EstimatorState& state,
                                          const std::vector<double>& descriptor,
                                          const std::string& object_id, int n) {
  std::vector<std::pair<double, std::size_t>> best;
  if (n <= 0) return {};
  for (std::size_t i = 0; i < state.exemplars.size(); ++i) {
    const Exemplar& e = state.exemplars[i];
    if (e.object_id != object_id) continue;
    const double d = SquaredDistance(e.descriptor, descriptor);
    if (best.size() == static_cast<std::size_t>(n) && !(d < best.back().first)) continue;
    auto pos = std::upper_bound(best.begin(), best.end(), d,
                                [](double v, const auto& p) { return v < p.first; });
    best.insert(pos, {d, i});
    if (best.size() > static_cast<std::size_t>(n)) best.pop_back();
  }
  std::vector<std::size_t> out;
  for (const auto& p : best) out.push_back(p.second);
  return out;
}

// Initial translation: centre voting with rays from each observed point to the
// cloud centroid pushed back along the viewing ray.
Vec3 InitialCenter(const EstimatorState& state, const geometry::PointCloud& cloud,
                   const geometry::PointCloud& sub, const geometry::ObjectModel& model) {
  const Vec3 centroid = geometry::Centroid(cloud);
  const Vec3 ray = centroid.normalized();
  const Vec3 guess = centroid + 0.25 * model.diameter * ray;
  try {
    return RansacCenterVote(sub, losses::CenterVectors(guess, sub), state.config.ransac);
  } catch (const Error&) {
    return centroid + 0.5 * model.diameter * ray;
  }
}

}  // namespace

Prediction Predict(const EstimatorState& state, const Crop& crop,
                   const geometry::ObjectModel& model,
                   const geometry::CameraIntrinsics& cam) {
  if (crop.cloud.empty()) throw PreconditionError("Predict: observed cloud is empty");
  const EstimatorConfig& cfg = state.config;
  const geometry::PointCloud sub =
      geometry::StrideSubsample(crop.cloud, cfg.icp.max_observed_points);
  const Vec3 observed_centroid = geometry::Centroid(crop.cloud);
  const Vec3 ray = observed_centroid.normalized();
  const Vec3 center = InitialCenter(state, crop.cloud, sub, model);

  std::vector<Quat> candidates;
  if (!state.exemplars.empty() && cfg.exemplar_neighbors > 0) {
    const std::vector<double> desc = ComputeDescriptor(crop);
    for (std::size_t i : NearestExemplars(state, desc, model.id, cfg.exemplar_neighbors)) {
      const Exemplar& e = state.exemplars[i];
      // Keep the rotation relative to the viewing ray (same appearance).
      const Quat align = Quat::FromTwoVectors(e.pose.translation().normalized(), ray);
      candidates.push_back(align * e.pose.rotation());
    }
  }
  const auto& anchors = geometry::IcosahedralRotationAnchors();
  for (int a : TopAnchors(state, cfg.top_k_anchors)) {
    candidates.push_back(anchors[a].rotation());
  }

  Prediction best{Pose(candidates.front(), center), kFailedResidual};
  bool have = false;
  for (const Quat& q : candidates) {
    Pose init(q, center);
    try {
      const geometry::PointCloud vis = geometry::VisibleSurfacePoints(model, init, cam);
      init = Pose(q, center + (observed_centroid - geometry::Centroid(vis)));
    } catch (const EmptyProjectionError&) {
    }
    try {
      const Prediction p = IcpRefine(init, model, sub, cam, cfg.icp);
      if (!have || p.fit_residual < best.fit_residual) {
        best = p;
        have = true;
      }
    } catch (const RefinementError&) {
    }
  }
  return best;
}

EstimatorState Train(const EstimatorState& state, const std::vector<LabeledCrop>& labeled,
                     const ModelTable& models, const losses::LossConfig& loss_config,
                     const geometry::CameraIntrinsics& cam) {
  EstimatorState next = state;
  if (labeled.empty()) return next;
  const EstimatorConfig& cfg = next.config;
  const auto& anchors = geometry::IcosahedralRotationAnchors();

  auto model_of = [&](const std::string& id) -> const geometry::ObjectModel& {
    auto it = models.find(id);
    if (it == models.end() || it->second == nullptr) {
      throw PreconditionError("Train: unknown object id '" + id + "'");
    }
    return *it->second;
  };

  std::map<std::string, geometry::ObjectModel> anchor_models;
  std::map<std::string, std::size_t> by_source;
  for (std::size_t i = 0; i < next.exemplars.size(); ++i) {
    if (!next.exemplars[i].source.empty()) by_source[next.exemplars[i].source] = i;
  }
  std::vector<double> counts(next.anchor_bias.size());
  for (std::size_t a = 0; a < counts.size(); ++a) counts[a] = std::expm1(next.anchor_bias[a]);

  for (const LabeledCrop& label : labeled) {
    if (label.crop == nullptr) throw PreconditionError("Train: null crop");
    const geometry::ObjectModel& model = model_of(label.object_id);

    // Reservoir insertion; a known source is overwritten in place.
    Exemplar ex{ComputeDescriptor(*label.crop), label.pose, label.object_id, label.source};
    const auto known = label.source.empty() ? by_source.end() : by_source.find(label.source);
    if (known != by_source.end()) {
      next.exemplars[known->second] = std::move(ex);
    } else {
      ++next.seen;
      std::optional<std::size_t> slot;
      if (next.exemplars.size() < cfg.capacity) {
        slot = next.exemplars.size();
        next.exemplars.push_back(Exemplar{});
      } else {
        std::mt19937_64 rng(util::DeriveSeed(cfg.seed, next.seen));
        std::uniform_int_distribution<std::uint64_t> pick(0, next.seen - 1);
        const std::uint64_t r = pick(rng);
        if (r < cfg.capacity) slot = static_cast<std::size_t>(r);
      }
      if (slot) {
        if (!next.exemplars[*slot].source.empty()) by_source.erase(next.exemplars[*slot].source);
        if (!ex.source.empty()) by_source[ex.source] = *slot;
        next.exemplars[*slot] = std::move(ex);
      }
    }

    // Anchors that explain the label gain soft counts.
    auto it = anchor_models.find(model.id);
    if (it == anchor_models.end()) {
      geometry::ObjectModel reduced = model;
      reduced.model_points = geometry::StrideSubsample(model.model_points, cfg.anchor_points);
      it = anchor_models.emplace(model.id, std::move(reduced)).first;
    }
    std::vector<double> logits(anchors.size());
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      const double l = losses::ShapeMatch(label.pose.rotation(), anchors[a].rotation(), it->second);
      logits[a] = -l / (cfg.anchor_temperature * model.diameter);
      max_logit = std::max(max_logit, logits[a]);
    }
    double z = 0.0;
    for (double& l : logits) {
      l = std::exp(l - max_logit);
      z += l;
    }
    for (std::size_t a = 0; a < anchors.size(); ++a) counts[a] += logits[a] / z;
  }
  for (std::size_t a = 0; a < counts.size(); ++a) next.anchor_bias[a] = std::log1p(counts[a]);

  // Diagnostic: self-training loss of the new state on an evenly spaced subset.
  const std::size_t n = std::min(cfg.diagnostic_sample, labeled.size());
  if (n > 0) {
    std::vector<Pose> pseudo, pred;
    std::vector<const geometry::ObjectModel*> used;
    for (std::size_t i = 0; i < n; ++i) {
      const LabeledCrop& label = labeled[i * labeled.size() / n];
      const geometry::ObjectModel& model = model_of(label.object_id);
      pseudo.push_back(label.pose);
      pred.push_back(Predict(next, *label.crop, model, cam).pose);
      used.push_back(&model);
    }
    next.training_loss = losses::ComputeSelfTrainingLoss(pseudo, pred, used, loss_config).value;
  }
  return next;
}

}  // namespace binpose::estimator
