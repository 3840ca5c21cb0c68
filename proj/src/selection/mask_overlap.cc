#include "binpose/selection/mask_overlap.h"

#include "binpose/errors.h"

namespace binpose::selection {

double MaskOverlapScore(const Mask& rendered, const Mask& observed) {
  if (rendered.width() != observed.width() || rendered.height() != observed.height()) {
    throw PreconditionError("MaskOverlapScore: mask sizes differ");
  }
  std::size_t obs_fg = 0, obs_fg_hit = 0, ren_bg = 0, ren_bg_hit = 0;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    const bool r = rendered.data()[i] != 0;
    const bool o = observed.data()[i] != 0;
    if (o) {
      ++obs_fg;
      if (r) ++obs_fg_hit;
    }
    if (!r) {
      ++ren_bg;
      if (!o) ++ren_bg_hit;
    }
  }
  if (obs_fg == 0) throw PreconditionError("MaskOverlapScore: observed foreground is empty");
  if (ren_bg == 0) throw PreconditionError("MaskOverlapScore: rendered background is empty");
  return 0.5 * (static_cast<double>(obs_fg_hit) / static_cast<double>(obs_fg) +
                static_cast<double>(ren_bg_hit) / static_cast<double>(ren_bg));
}

double MaskDistance(const Mask& rendered, const Mask& observed) {
  return 1.0 - MaskOverlapScore(rendered, observed);
}

}  // namespace binpose::selection
