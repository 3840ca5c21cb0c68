#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace binpose::pipeline {

struct ObjectIterationStats {
  std::string object_id;
  std::size_t predicted = 0;
  std::size_t selected = 0;
  /// Predictions with a sentinel geometry score (no visible projection).
  std::size_t sentinel = 0;
  std::optional<double> tau_a, tau_g;
  std::optional<double> selected_mean_d_a, selected_mean_d_g;
  std::optional<double> rejected_mean_d_a, rejected_mean_d_g;
  /// Mean ADD(-S) of selected / rejected pseudo labels; only filled when the
  /// caller had ground truth at hand (diagnostics, never used for selection).
  std::optional<double> selected_mean_add, rejected_mean_add;
  double recall = 0.0;
  std::size_t eval_instances = 0;
};

struct IterationReport {
  int iteration = 0;
  std::string selection_mode;
  bool stall = false;
  double training_loss = 0.0;
  /// Teacher report only: recall on a subset of its own synthetic split.
  std::optional<double> synthetic_recall;
  std::vector<ObjectIterationStats> objects;
  /// Unweighted mean of per-object recalls.
  double mean_recall = 0.0;
  /// Kept out of the JSON so reports stay byte-identical across runs.
  double wall_seconds = 0.0;

  std::size_t total_selected() const;
  std::size_t total_predicted() const;
};

nlohmann::json ToJson(const IterationReport& report);
IterationReport ReportFromJson(const nlohmann::json& j);

std::string ReportFileName(int iteration);
std::string ScoresFileName(int iteration);
std::string StateFileName(int iteration);

void WriteReport(const IterationReport& report, const std::filesystem::path& dir);
/// Reads report_iter_0.json, report_iter_1.json, ... until one is missing.
std::vector<IterationReport> ReadReports(const std::filesystem::path& dir);
/// timing.json: wall seconds per iteration.
void WriteTiming(const std::vector<IterationReport>& reports, const std::filesystem::path& dir);

/// Pretty-printed JSON with a trailing newline.
void WriteJsonFile(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace binpose::pipeline
