#pragma once

#include <limits>
#include <span>
#include <string>

namespace binpose::selection {

/// d_g value for predictions whose projection is empty.
inline constexpr double kSentinelDistance = std::numeric_limits<double>::infinity();

inline bool IsSentinel(double d) { return !(d < kSentinelDistance); }

struct SelectionScores {
  double d_mask = 0.0;
  double d_image = 0.0;
  double d_a = 0.0;  ///< d_mask * d_image
  double d_g = 0.0;  ///< metres, or kSentinelDistance

  bool operator==(const SelectionScores&) const = default;
};

double AppearanceDistance(double d_mask, double d_image);

SelectionScores MakeScores(double d_mask, double d_image, double d_g);

struct Thresholds {
  double tau_a = 0.0;
  double tau_g = 0.0;
};

/// tau = mean + population standard deviation, separately for d_a and d_g.
/// Items whose d_g is the sentinel are left out of both populations.
/// Throws PreconditionError if fewer than two items remain.
Thresholds AdaptiveThresholds(std::span<const SelectionScores> scores);

enum class SelectionMode {
  kAppearanceAndGeometry,
  kAppearanceOnly,
  kGeometryOnly,
};

std::string ToString(SelectionMode mode);
/// Accepts "both", "appearance", "geometry". Throws ConfigError otherwise.
SelectionMode ParseSelectionMode(const std::string& name);

/// d_a < tau_a and d_g < tau_g (strict). Sentinel d_g is always rejected.
/// The ablation modes drop one of the two comparisons.
bool Select(const SelectionScores& scores, const Thresholds& thresholds,
            SelectionMode mode = SelectionMode::kAppearanceAndGeometry);

}  // namespace binpose::selection
