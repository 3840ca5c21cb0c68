#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "binpose/estimator/estimator.h"
#include "binpose/pipeline/config.h"
#include "binpose/pipeline/crops.h"
#include "binpose/pipeline/reports.h"
#include "binpose/selection/score_table.h"
#include "binpose/simdata/dataset.h"

namespace binpose::pipeline {

/// Everything an iteration needs, prepared once: models, crops of each split.
/// Evaluation ground truth is only reachable through `eval_gt`.
class Workspace {
 public:
  /// Throws ConfigError if the config references unknown objects.
  Workspace(const simdata::Dataset& dataset, const PipelineConfig& config);

  const simdata::Dataset& dataset() const { return dataset_; }
  const PipelineConfig& config() const { return config_; }
  const estimator::ModelTable& models() const { return models_; }
  const std::vector<std::string>& object_ids() const { return object_ids_; }
  const geometry::ObjectModel& model(const std::string& id) const;

  const SplitCrops& synthetic() const { return synthetic_; }
  const SplitCrops& unlabeled() const { return unlabeled_; }
  const SplitCrops& eval() const { return eval_; }

  /// Estimator config with the seed derived from the master seed.
  estimator::EstimatorConfig MakeEstimatorConfig() const;

 private:
  const simdata::Dataset& dataset_;
  PipelineConfig config_;
  std::vector<std::string> object_ids_;
  estimator::ModelTable models_;
  SplitCrops synthetic_, unlabeled_, eval_;
};

struct TeacherResult {
  estimator::EstimatorState state;
  IterationReport report;
};

/// Trains on every synthetic crop. The report carries synthetic recall and,
/// when `eval_gt` is given, the eval-split recall. Throws PreconditionError
/// on an empty synthetic split.
TeacherResult TrainTeacher(const Workspace& ws, const simdata::GroundTruthStore* eval_gt);

struct IterationResult {
  estimator::EstimatorState student;
  IterationReport report;
  std::vector<selection::ScoreRecord> scores;
};

/// Predict, score, threshold per object, select, train. Zero selections give
/// student == teacher and report.stall. `diagnostic_gt` (optional) only adds
/// the ADD means of selected / rejected labels to the report.
IterationResult SelfTrainIteration(const Workspace& ws, const estimator::EstimatorState& teacher,
                                   int iteration, const simdata::GroundTruthStore* eval_gt,
                                   const simdata::GroundTruthStore* diagnostic_gt = nullptr);

struct RecallTable {
  std::vector<std::string> object_ids;
  std::vector<double> recall;
  std::vector<std::size_t> counts;
  double mean = 0.0;
};

/// ADD(-S) recall at 10% of the diameter per object over the eval split.
/// Throws AccessError when `gt` lacks a scene.
RecallTable Evaluate(const Workspace& ws, const estimator::EstimatorState& state,
                     const simdata::GroundTruthStore& gt);
/// Pose for eval instance i (an index into `ws.eval().instances`); only
/// called for instances that have a crop.
using EvalPredictor = std::function<geometry::Pose(std::size_t)>;
RecallTable Evaluate(const Workspace& ws, const EvalPredictor& predict,
                     const simdata::GroundTruthStore& gt);

void WriteRecallTable(const RecallTable& table, const std::filesystem::path& csv,
                      const std::filesystem::path& json);

struct LoopOptions {
  /// Output directory for states, reports, score tables and plots.
  std::filesystem::path out_dir;
  const simdata::GroundTruthStore* eval_gt = nullptr;
  const simdata::GroundTruthStore* diagnostic_gt = nullptr;
  /// Start from this state instead of training a teacher.
  std::optional<estimator::EstimatorState> teacher;
};

/// Teacher plus `config.iterations` rounds; every state and report is written
/// as soon as it exists. Returns iterations + 1 reports.
std::vector<IterationReport> IterativeSelfTraining(const Workspace& ws, const LoopOptions& options);

/// Oracle upper bound: trains on the unlabeled split's withheld labels.
estimator::EstimatorState TrainOnRealLabels(const Workspace& ws,
                                            const estimator::EstimatorState& teacher,
                                            const simdata::GroundTruthStore& gt);

}  // namespace binpose::pipeline
