#include "binpose/pipeline/config.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "binpose/errors.h"

namespace binpose::pipeline {

using nlohmann::json;

void PipelineConfig::Validate() const {
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (min_visible_pixels < 1) throw ConfigError("min_visible_pixels must be >= 1");
  if (crop_padding < 0) throw ConfigError("crop_padding must be >= 0");
  if (selection.window_padding < 0) throw ConfigError("selection.window_padding must be >= 0");
  try {
    selection.features.Validate();
    estimator.Validate();
    loss.Validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  std::set<std::string> seen;
  for (const auto& id : object_ids) {
    if (!seen.insert(id).second) throw ConfigError("duplicate object id '" + id + "'");
  }
}

void PipelineConfig::ValidateAgainst(const simdata::Dataset& dataset) const {
  Validate();
  for (const auto& id : object_ids) {
    const bool found = std::any_of(dataset.objects.begin(), dataset.objects.end(),
                                   [&](const auto& o) { return o.id == id; });
    if (!found) throw ConfigError("object id '" + id + "' is not in the dataset manifest");
  }
}

PipelineConfig PipelineConfig::FromJson(const json& j) {
  static const std::set<std::string> kKeys = {
      "dataset_dir", "report_dir",         "objects",         "iterations",
      "selection",   "estimator",          "loss",            "seed",
      "min_visible_pixels", "teacher_eval_sample", "crop_padding", "dataset"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  PipelineConfig c;
  try {
    c.dataset_dir = j.value("dataset_dir", c.dataset_dir);
    c.report_dir = j.value("report_dir", c.report_dir);
    c.object_ids = j.value("objects", c.object_ids);
    c.iterations = j.value("iterations", c.iterations);
    c.seed = j.value("seed", c.seed);
    c.min_visible_pixels = j.value("min_visible_pixels", c.min_visible_pixels);
    c.teacher_eval_sample = j.value("teacher_eval_sample", c.teacher_eval_sample);
    c.crop_padding = j.value("crop_padding", c.crop_padding);
    if (j.contains("selection")) {
      const json& s = j.at("selection");
      c.selection.mode = selection::ParseSelectionMode(s.value("mode", std::string("both")));
      c.selection.features.levels = s.value("levels", c.selection.features.levels);
      c.selection.features.sigma = s.value("sigma", c.selection.features.sigma);
      c.selection.features.epsilon = s.value("epsilon", c.selection.features.epsilon);
      c.selection.window_padding = s.value("window_padding", c.selection.window_padding);
    }
    if (j.contains("estimator")) c.estimator = estimator::EstimatorConfig::FromJson(j.at("estimator"));
    if (j.contains("loss")) c.loss = losses::LossConfig::FromJson(j.at("loss"));
    if (j.contains("dataset")) c.dataset = simdata::DatasetSpec::FromJson(j.at("dataset"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  c.dataset.seed = c.seed;
  c.Validate();
  return c;
}

json PipelineConfig::ToJson() const {
  json dataset_json = dataset.ToJson();
  dataset_json.erase("seed");
  return {{"dataset_dir", dataset_dir},
          {"report_dir", report_dir},
          {"objects", object_ids},
          {"iterations", iterations},
          {"selection",
           {{"mode", selection::ToString(selection.mode)},
            {"levels", selection.features.levels},
            {"sigma", selection.features.sigma},
            {"epsilon", selection.features.epsilon},
            {"window_padding", selection.window_padding}}},
          {"estimator", estimator.ToJson()},
          {"loss", loss.ToJson()},
          {"seed", seed},
          {"min_visible_pixels", min_visible_pixels},
          {"teacher_eval_sample", teacher_eval_sample},
          {"crop_padding", crop_padding},
          {"dataset", dataset_json}};
}

PipelineConfig PipelineConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return FromJson(j);
}

}  // namespace binpose::pipeline
