#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "binpose/pipeline/reports.h"

namespace binpose::pipeline {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct ChartSpec {
  std::string title;
  std::string x_label, y_label;
  /// Fixed y range; when y_min == y_max the range is taken from the data.
  double y_min = 0.0, y_max = 0.0;
  int width = 480, height = 320;
};

/// Standalone SVG line chart with markers and a legend.
std::string LineChartSvg(const std::vector<Series>& series, const ChartSpec& spec);

/// Recall per object (and the mean) against iteration, y fixed to [0, 1].
std::string RecallChartSvg(const std::vector<IterationReport>& reports);
/// Selected pseudo-label count per object against iteration.
std::string SelectedChartSvg(const std::vector<IterationReport>& reports);

/// Writes recall.svg and selected.svg. Throws PreconditionError when
/// `reports` is empty.
void EmitPlots(const std::vector<IterationReport>& reports, const std::filesystem::path& dir);

}  // namespace binpose::pipeline
