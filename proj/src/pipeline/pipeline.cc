#include "binpose/pipeline/pipeline.h"

#include <chrono>
#include <fstream>

#include "binpose/errors.h"
#include "binpose/estimator/state_io.h"
#include "binpose/geometry/metrics.h"
#include "binpose/pipeline/plots.h"
#include "binpose/selection/scoring.h"
#include "binpose/util/number_format.h"
#include "binpose/util/random.h"

namespace binpose::pipeline {

namespace fs = std::filesystem;
using estimator::Crop;
using estimator::EstimatorState;
using estimator::LabeledCrop;
using geometry::Pose;
using geometry::PosePair;

namespace {

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

const Pose& GroundTruth(const simdata::GroundTruthStore& gt, const InstanceRef& ref) {
  const auto it = gt.find(ref.scene_id);
  if (it == gt.end() || static_cast<std::size_t>(ref.instance) >= it->second.size()) {
    throw AccessError("no ground truth for " + ref.scene_id + " instance " +
                      std::to_string(ref.instance));
  }
  return it->second[ref.instance];
}

std::string SourceKey(const InstanceRef& ref) {
  return ref.scene_id + "/" + std::to_string(ref.instance);
}

std::optional<double> Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void FillRecall(IterationReport& report, const RecallTable& table) {
  for (std::size_t i = 0; i < table.object_ids.size(); ++i) {
    report.objects[i].recall = table.recall[i];
    report.objects[i].eval_instances = table.counts[i];
  }
  report.mean_recall = table.mean;
}

IterationReport EmptyReport(const Workspace& ws, int iteration) {
  IterationReport r;
  r.iteration = iteration;
  r.selection_mode = selection::ToString(ws.config().selection.mode);
  for (const auto& id : ws.object_ids()) {
    ObjectIterationStats stats;
    stats.object_id = id;
    r.objects.push_back(std::move(stats));
  }
  return r;
}

}  // namespace

Workspace::Workspace(const simdata::Dataset& dataset, const PipelineConfig& config)
    : dataset_(dataset), config_(config) {
  config_.ValidateAgainst(dataset);
  object_ids_ = config_.object_ids;
  if (object_ids_.empty()) {
    for (const auto& o : dataset.objects) object_ids_.push_back(o.id);
  }
  for (const auto& id : object_ids_) models_[id] = &dataset.object(id);
  const int pad = config_.crop_padding, min_px = config_.min_visible_pixels;
  synthetic_ = ExtractCrops(dataset.Split(simdata::kSyntheticSplit), object_ids_, pad, min_px);
  unlabeled_ = ExtractCrops(dataset.Split(simdata::kUnlabeledSplit), object_ids_, pad, min_px);
  eval_ = ExtractCrops(dataset.Split(simdata::kEvalSplit), object_ids_, pad, min_px);
}

const geometry::ObjectModel& Workspace::model(const std::string& id) const {
  const auto it = models_.find(id);
  if (it == models_.end()) throw PreconditionError("object '" + id + "' is not configured");
  return *it->second;
}

estimator::EstimatorConfig Workspace::MakeEstimatorConfig() const {
  estimator::EstimatorConfig c = config_.estimator;
  c.seed = util::DeriveSeed(config_.seed, 17);
  c.ransac.seed = c.seed;
  return c;
}

RecallTable Evaluate(const Workspace& ws, const EstimatorState& state,
                     const simdata::GroundTruthStore& gt) {
  const SplitCrops& split = ws.eval();
  const geometry::CameraIntrinsics& cam = ws.dataset().intrinsics;
  return Evaluate(
      ws,
      [&](std::size_t i) {
        const InstanceRef& ref = split.instances[i];
        return estimator::Predict(state, split.crops[split.crop_index[i]],
                                  ws.model(ref.object_id), cam)
            .pose;
      },
      gt);
}

RecallTable Evaluate(const Workspace& ws, const EvalPredictor& predict,
                     const simdata::GroundTruthStore& gt) {
  const SplitCrops& split = ws.eval();
  RecallTable table;
  table.object_ids = ws.object_ids();
  std::vector<std::vector<PosePair>> pairs(table.object_ids.size());
  for (std::size_t i = 0; i < split.instances.size(); ++i) {
    if (split.crop_index[i] < 0) continue;
    const InstanceRef& ref = split.instances[i];
    const Pose& truth = GroundTruth(gt, ref);
    const std::size_t obj = static_cast<std::size_t>(
        std::find(table.object_ids.begin(), table.object_ids.end(), ref.object_id) -
        table.object_ids.begin());
    pairs[obj].push_back({predict(i), truth});
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double r =
        pairs[k].empty() ? 0.0 : geometry::AddRecall(pairs[k], ws.model(table.object_ids[k]));
    table.recall.push_back(r);
    table.counts.push_back(pairs[k].size());
    sum += r;
  }
  table.mean = table.recall.empty() ? 0.0 : sum / static_cast<double>(table.recall.size());
  return table;
}

void WriteRecallTable(const RecallTable& table, const fs::path& csv, const fs::path& json_path) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw DataError(csv.string(), "cannot open for writing");
  out << "object_id,instances,recall\n";
  nlohmann::json objects = nlohmann::json::array();
  for (std::size_t i = 0; i < table.object_ids.size(); ++i) {
    out << table.object_ids[i] << ',' << table.counts[i] << ','
        << util::FormatDouble(table.recall[i]) << '\n';
    objects.push_back({{"object_id", table.object_ids[i]},
                       {"instances", table.counts[i]},
                       {"recall", table.recall[i]}});
  }
  out << "mean,," << util::FormatDouble(table.mean) << '\n';
  if (!out) throw DataError(csv.string(), "write failed");
  WriteJsonFile({{"objects", objects}, {"mean", table.mean}}, json_path);
}

TeacherResult TrainTeacher(const Workspace& ws, const simdata::GroundTruthStore* eval_gt) {
  const auto start = std::chrono::steady_clock::now();
  const SplitCrops& split = ws.synthetic();
  const geometry::CameraIntrinsics& cam = ws.dataset().intrinsics;
  std::vector<LabeledCrop> labeled;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < split.instances.size(); ++i) {
    if (split.crop_index[i] < 0) continue;
    const InstanceRef& ref = split.instances[i];
    const Pose& pose = ws.dataset().scene(ref.scene_id).labels()[ref.instance];
    labeled.push_back({&split.crops[split.crop_index[i]], pose, ref.object_id, SourceKey(ref)});
    owner.push_back(i);
  }
  if (labeled.empty()) throw PreconditionError("TrainTeacher: the synthetic split has no usable instance");

  TeacherResult result{
      estimator::Train(EstimatorState::Initial(ws.MakeEstimatorConfig()), labeled, ws.models(),
                       ws.config().loss, cam),
      EmptyReport(ws, 0)};
  result.report.training_loss = result.state.training_loss;

  // Own-split recall on an evenly spaced subset.
  const std::size_t n = std::min(ws.config().teacher_eval_sample, labeled.size());
  std::map<std::string, std::vector<PosePair>> pairs;
  for (std::size_t j = 0; j < n; ++j) {
    const LabeledCrop& l = labeled[j * labeled.size() / n];
    const auto pred = estimator::Predict(result.state, *l.crop, ws.model(l.object_id), cam);
    pairs[l.object_id].push_back({pred.pose, l.pose});
  }
  if (n > 0) {
    double sum = 0.0;
    for (const auto& [id, p] : pairs) sum += geometry::AddRecall(p, ws.model(id));
    result.report.synthetic_recall = sum / static_cast<double>(pairs.size());
  }
  if (eval_gt) FillRecall(result.report, Evaluate(ws, result.state, *eval_gt));
  result.report.wall_seconds = Seconds(start);
  return result;
}

IterationResult SelfTrainIteration(const Workspace& ws, const EstimatorState& teacher,
                                   int iteration, const simdata::GroundTruthStore* eval_gt,
                                   const simdata::GroundTruthStore* diagnostic_gt) {
  const auto start = std::chrono::steady_clock::now();
  const SplitCrops& split = ws.unlabeled();
  if (split.instances.empty()) throw PreconditionError("SelfTrainIteration: unlabeled split is empty");
  const PipelineConfig& cfg = ws.config();
  const geometry::CameraIntrinsics& cam = ws.dataset().intrinsics;
  const selection::PyramidFeatureExtractor extractor(cfg.selection.features);
  selection::ScoringOptions scoring;
  scoring.window_padding = cfg.selection.window_padding;

  IterationResult result{teacher, EmptyReport(ws, iteration), {}};
  const std::size_t count = split.instances.size();
  std::vector<Pose> predicted(count);
  std::vector<bool> has_prediction(count, false);
  result.scores.resize(count);

  // (1) predict and (2) score.
  for (std::size_t i = 0; i < count; ++i) {
    const InstanceRef& ref = split.instances[i];
    selection::ScoreRecord& row = result.scores[i];
    row.scene_id = ref.scene_id;
    row.instance_id = ref.instance;
    row.scores = selection::MakeScores(1.0, 1.0, selection::kSentinelDistance);
    if (split.crop_index[i] < 0) continue;
    const Crop& crop = split.crops[split.crop_index[i]];
    const geometry::ObjectModel& model = ws.model(ref.object_id);
    const estimator::Prediction pred = estimator::Predict(teacher, crop, model, cam);
    if (pred.fit_residual == estimator::kFailedResidual) continue;
    predicted[i] = pred.pose;
    has_prediction[i] = true;
    const selection::Observation obs{&split.images[split.scene_index[i]], split.masks[i],
                                     &crop.cloud};
    row.scores = selection::ScorePrediction(pred.pose, model, obs, cam, extractor, scoring);
  }

  // (3) thresholds per object and (4) selection.
  std::vector<LabeledCrop> selected;
  for (std::size_t k = 0; k < ws.object_ids().size(); ++k) {
    ObjectIterationStats& stats = result.report.objects[k];
    std::vector<selection::SelectionScores> population;
    for (std::size_t i = 0; i < count; ++i) {
      if (has_prediction[i] && split.instances[i].object_id == stats.object_id) {
        population.push_back(result.scores[i].scores);
      }
    }
    stats.predicted = population.size();
    std::optional<selection::Thresholds> tau;
    try {
      tau = selection::AdaptiveThresholds(population);
      stats.tau_a = tau->tau_a;
      stats.tau_g = tau->tau_g;
    } catch (const PreconditionError&) {
    }
    std::vector<double> sel_a, sel_g, rej_a, rej_g, sel_add, rej_add;
    for (std::size_t i = 0; i < count; ++i) {
      const InstanceRef& ref = split.instances[i];
      if (!has_prediction[i] || ref.object_id != stats.object_id) continue;
      selection::ScoreRecord& row = result.scores[i];
      if (selection::IsSentinel(row.scores.d_g)) ++stats.sentinel;
      row.selected = tau && selection::Select(row.scores, *tau, cfg.selection.mode);
      auto& a = row.selected ? sel_a : rej_a;
      auto& g = row.selected ? sel_g : rej_g;
      a.push_back(row.scores.d_a);
      if (!selection::IsSentinel(row.scores.d_g)) g.push_back(row.scores.d_g);
      if (diagnostic_gt) {
        const double add =
            geometry::AddOrAddS(predicted[i], GroundTruth(*diagnostic_gt, ref), ws.model(ref.object_id));
        (row.selected ? sel_add : rej_add).push_back(add);
      }
      if (row.selected) {
        ++stats.selected;
      }
    }
    stats.selected_mean_d_a = Mean(sel_a);
    stats.selected_mean_d_g = Mean(sel_g);
    stats.rejected_mean_d_a = Mean(rej_a);
    stats.rejected_mean_d_g = Mean(rej_g);
    stats.selected_mean_add = Mean(sel_add);
    stats.rejected_mean_add = Mean(rej_add);
  }
  // Training order is the split order, independent of the object loop.
  for (std::size_t i = 0; i < count; ++i) {
    if (!result.scores[i].selected) continue;
    selected.push_back({&split.crops[split.crop_index[i]], predicted[i],
                        split.instances[i].object_id, SourceKey(split.instances[i])});
  }

  // (5) student.
  if (selected.empty()) {
    result.report.stall = true;
  } else {
    result.student = estimator::Train(teacher, selected, ws.models(), cfg.loss, cam);
  }
  result.report.training_loss = result.student.training_loss;
  if (eval_gt) FillRecall(result.report, Evaluate(ws, result.student, *eval_gt));
  result.report.wall_seconds = Seconds(start);
  return result;
}

std::vector<IterationReport> IterativeSelfTraining(const Workspace& ws, const LoopOptions& options) {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw DataError(options.out_dir.string(), "cannot create directory: " + ec.message());

  std::vector<IterationReport> reports;
  EstimatorState teacher;
  if (options.teacher) {
    const auto start = std::chrono::steady_clock::now();
    teacher = *options.teacher;
    IterationReport r = EmptyReport(ws, 0);
    r.training_loss = teacher.training_loss;
    if (options.eval_gt) FillRecall(r, Evaluate(ws, teacher, *options.eval_gt));
    r.wall_seconds = Seconds(start);
    reports.push_back(std::move(r));
  } else {
    TeacherResult t = TrainTeacher(ws, options.eval_gt);
    teacher = std::move(t.state);
    reports.push_back(std::move(t.report));
  }
  estimator::SaveState(teacher, options.out_dir / StateFileName(0));
  WriteReport(reports.back(), options.out_dir);
  WriteTiming(reports, options.out_dir);

  for (int k = 1; k <= ws.config().iterations; ++k) {
    IterationResult it = SelfTrainIteration(ws, teacher, k, options.eval_gt, options.diagnostic_gt);
    selection::WriteScoresCsv(it.scores, options.out_dir / ScoresFileName(k));
    estimator::SaveState(it.student, options.out_dir / StateFileName(k));
    WriteReport(it.report, options.out_dir);
    reports.push_back(std::move(it.report));
    WriteTiming(reports, options.out_dir);
    teacher = std::move(it.student);
  }
  EmitPlots(reports, options.out_dir);
  return reports;
}

EstimatorState TrainOnRealLabels(const Workspace& ws, const EstimatorState& teacher,
                                 const simdata::GroundTruthStore& gt) {
  const SplitCrops& split = ws.unlabeled();
  std::vector<LabeledCrop> labeled;
  for (std::size_t i = 0; i < split.instances.size(); ++i) {
    if (split.crop_index[i] < 0) continue;
    const InstanceRef& ref = split.instances[i];
    labeled.push_back(
        {&split.crops[split.crop_index[i]], GroundTruth(gt, ref), ref.object_id, SourceKey(ref)});
  }
  return estimator::Train(teacher, labeled, ws.models(), ws.config().loss, ws.dataset().intrinsics);
}

}  // namespace binpose::pipeline
