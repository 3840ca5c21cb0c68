#include "binpose/simdata/domain_shift.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace binpose::simdata {

render::Mask ErodeMask(const render::Mask& mask, int radius) {
  if (radius <= 0) return mask;
  const int w = mask.width(), h = mask.height();
  // Separable: a pixel survives if its whole (2r+1)^2 window is foreground.
  render::Mask rows(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      bool keep = true;
      for (int du = -radius; du <= radius && keep; ++du) {
        keep = mask.contains(u + du, v) && mask.at(u + du, v);
      }
      rows.at(u, v) = keep ? 1 : 0;
    }
  }
  render::Mask out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      bool keep = true;
      for (int dv = -radius; dv <= radius && keep; ++dv) {
        keep = rows.contains(u, v + dv) && rows.at(u, v + dv);
      }
      out.at(u, v) = keep ? 1 : 0;
    }
  }
  return out;
}

Scene DomainShift(const Scene& scene, const ShiftSpec& spec, std::uint64_t seed,
                  GroundTruthStore& withheld) {
  spec.Validate();
  const std::vector<Pose>& labels = scene.labels();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double brightness =
      spec.brightness_min + (spec.brightness_max - spec.brightness_min) * uni(rng);
  const double contrast = spec.contrast_min + (spec.contrast_max - spec.contrast_min) * uni(rng);

  Scene out = scene;
  for (auto& px : out.image.data()) {
    for (auto& c : px) {
      const double x = (c / 255.0 - 0.5) * contrast + 0.5 + brightness;
      c = static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma_mm = spec.depth_noise_sigma * 1000.0;
  for (auto& d : out.depth.data()) {
    if (d == 0) continue;
    if (spec.depth_dropout > 0.0 && uni(rng) < spec.depth_dropout) {
      d = 0;
      continue;
    }
    if (sigma_mm > 0.0) {
      const double mm = std::round(d + sigma_mm * gauss(rng));
      d = static_cast<std::uint16_t>(std::clamp(mm, 1.0, 65535.0));
    }
  }

  for (auto& m : out.masks) m = ErodeMask(m, spec.mask_erosion_radius);

  withheld[scene.scene_id] = labels;
  out.withhold_labels();
  return out;
}

}  // namespace binpose::simdata
