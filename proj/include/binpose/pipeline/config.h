#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "binpose/estimator/estimator.h"
#include "binpose/losses/losses.h"
#include "binpose/selection/perceptual.h"
#include "binpose/selection/scores.h"
#include "binpose/simdata/dataset.h"

namespace binpose::pipeline {

struct SelectionSettings {
  selection::SelectionMode mode = selection::SelectionMode::kAppearanceAndGeometry;
  selection::FeatureExtractorSpec features;
  int window_padding = 4;
};

struct PipelineConfig {
  std::string dataset_dir = "data";
  std::string report_dir = "reports";
  /// Objects to train and evaluate; empty means every object in the dataset.
  std::vector<std::string> object_ids;
  int iterations = 5;
  SelectionSettings selection;
  estimator::EstimatorConfig estimator;
  losses::LossConfig loss;
  std::uint64_t seed = 1;
  /// Instances with fewer visible pixels are not cropped.
  int min_visible_pixels = 50;
  /// Synthetic instances re-predicted for the teacher's own-split recall.
  std::size_t teacher_eval_sample = 100;
  int crop_padding = 2;
  /// Used by `gen`; its seed is taken from `seed`.
  simdata::DatasetSpec dataset;

  /// Throws ConfigError.
  void Validate() const;
  /// Also checks that every configured object id exists in `dataset`.
  void ValidateAgainst(const simdata::Dataset& dataset) const;

  /// Unknown keys are rejected. Throws ConfigError.
  static PipelineConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  static PipelineConfig Load(const std::filesystem::path& path);
};

}  // namespace binpose::pipeline
