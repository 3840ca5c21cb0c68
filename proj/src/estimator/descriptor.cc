#include "binpose/estimator/descriptor.h"

#include <algorithm>
#include <limits>

#include "binpose/errors.h"

namespace binpose::estimator {

std::vector<double> ComputeDescriptor(const Crop& crop) {
  const render::PixelBox box = render::MaskBounds(crop.mask);
  if (box.empty()) throw PreconditionError("descriptor: empty mask");
  std::vector<double> out(kDescriptorLength, 0.0);

  // Square window centred on the mask box keeps the silhouette's aspect ratio.
  const int side = std::max(box.width(), box.height());
  const int su0 = box.u0 - (side - box.width()) / 2;
  const int sv0 = box.v0 - (side - box.height()) / 2;
  std::vector<double> fg(kMaskGrid * kMaskGrid, 0.0), cells(kMaskGrid * kMaskGrid, 0.0);
  for (int v = sv0; v < sv0 + side; ++v) {
    for (int u = su0; u < su0 + side; ++u) {
      const int cell = ((v - sv0) * kMaskGrid / side) * kMaskGrid + (u - su0) * kMaskGrid / side;
      cells[cell] += 1.0;
      if (crop.mask.contains(u, v) && crop.mask.at(u, v)) fg[cell] += 1.0;
    }
  }
  for (int i = 0; i < kMaskGrid * kMaskGrid; ++i) out[i] = fg[i] / cells[i];

  double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
  double lum_sum = 0.0, lum_sq = 0.0;
  std::size_t lum_n = 0;
  for (int v = 0; v < crop.mask.height(); ++v) {
    for (int u = 0; u < crop.mask.width(); ++u) {
      if (!crop.mask.at(u, v)) continue;
      const double z = crop.depth.at(u, v);
      if (z > 0.0) {
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
      }
      const render::Rgb& c = crop.image.at(u, v);
      const double l = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
      lum_sum += l;
      lum_sq += l * l;
      ++lum_n;
    }
  }

  constexpr double kEps = 1e-9;
  const int hist_offset = kMaskGrid * kMaskGrid;
  std::size_t depth_n = 0;
  for (int v = 0; v < crop.mask.height(); ++v) {
    for (int u = 0; u < crop.mask.width(); ++u) {
      const double z = crop.depth.at(u, v);
      if (!crop.mask.at(u, v) || !(z > 0.0)) continue;
      const double t = (z - zmin) / (zmax - zmin + kEps);
      const int bin = std::clamp(static_cast<int>(t * kDepthBins), 0, kDepthBins - 1);
      out[hist_offset + bin] += 1.0;
      ++depth_n;
    }
  }
  if (depth_n > 0) {
    for (int b = 0; b < kDepthBins; ++b) out[hist_offset + b] /= static_cast<double>(depth_n);
  }

  const double mean = lum_sum / static_cast<double>(lum_n);
  out[kDescriptorLength - 2] = mean;
  out[kDescriptorLength - 1] = std::max(0.0, lum_sq / static_cast<double>(lum_n) - mean * mean);
  return out;
}

}  // namespace binpose::estimator
