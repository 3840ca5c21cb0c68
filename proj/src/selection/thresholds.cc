#include <cmath>
#include <vector>

#include "binpose/errors.h"
#include "binpose/selection/scores.h"

namespace binpose::selection {

double AppearanceDistance(double d_mask, double d_image) { return d_mask * d_image; }

SelectionScores MakeScores(double d_mask, double d_image, double d_g) {
  return {d_mask, d_image, AppearanceDistance(d_mask, d_image), d_g};
}

namespace {

// Mean plus population (1/N) standard deviation, summed in index order.
double MeanPlusStd(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return mean + std::sqrt(var / n);
}

}  // namespace

Thresholds AdaptiveThresholds(std::span<const SelectionScores> scores) {
  std::vector<double> a, g;
  for (const SelectionScores& s : scores) {
    if (IsSentinel(s.d_g)) continue;
    a.push_back(s.d_a);
    g.push_back(s.d_g);
  }
  if (a.size() < 2) {
    throw PreconditionError("AdaptiveThresholds: need at least two valid scores");
  }
  return {MeanPlusStd(a), MeanPlusStd(g)};
}

std::string ToString(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kAppearanceAndGeometry:
      return "both";
    case SelectionMode::kAppearanceOnly:
      return "appearance";
    case SelectionMode::kGeometryOnly:
      return "geometry";
  }
  return "both";
}

SelectionMode ParseSelectionMode(const std::string& name) {
  if (name == "both") return SelectionMode::kAppearanceAndGeometry;
  if (name == "appearance") return SelectionMode::kAppearanceOnly;
  if (name == "geometry") return SelectionMode::kGeometryOnly;
  throw ConfigError("unknown selection mode '" + name + "'");
}

bool Select(const SelectionScores& scores, const Thresholds& thresholds,
            SelectionMode mode) {
  if (IsSentinel(scores.d_g)) return false;
  const bool appearance_ok = scores.d_a < thresholds.tau_a;
  const bool geometry_ok = scores.d_g < thresholds.tau_g;
  switch (mode) {
    case SelectionMode::kAppearanceOnly:
      return appearance_ok;
    case SelectionMode::kGeometryOnly:
      return geometry_ok;
    case SelectionMode::kAppearanceAndGeometry:
      break;
  }
  return appearance_ok && geometry_ok;
}

}  // namespace binpose::selection
