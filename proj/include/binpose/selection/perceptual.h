#pragma once

#include <memory>
#include <vector>

#include "binpose/render/image.h"

namespace binpose::selection {

using GrayImage = render::Buffer2D<double>;

/// Per-pixel feature vectors of one pyramid level, stored pixel-major.
struct FeatureMap {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> values;

  const double* at(int u, int v) const {
    return values.data() + (static_cast<std::size_t>(v) * width + u) * channels;
  }
};

/// Multi-level extractor contract: every level holds per-pixel feature
/// vectors that are unit length, except where the raw vector is shorter
/// than the guard epsilon (those are divided by epsilon instead, so an
/// all-zero vector stays zero).
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::vector<FeatureMap> Extract(const render::ColorImage& image) const = 0;
};

/// Default handcrafted extractor. Level 0 is the luminance image; level l+1
/// is level l blurred with a Gaussian of `sigma` and subsampled by two.
/// Each level yields [luminance, d/du, d/dv] from central differences
/// (replicated borders), normalised per pixel.
struct FeatureExtractorSpec {
  int levels = 3;
  double sigma = 1.0;
  double epsilon = 1e-8;

  /// Throws PreconditionError if levels < 1, sigma <= 0 or epsilon <= 0.
  void Validate() const;
};

class PyramidFeatureExtractor : public FeatureExtractor {
 public:
  explicit PyramidFeatureExtractor(FeatureExtractorSpec spec = {});
  std::vector<FeatureMap> Extract(const render::ColorImage& image) const override;
  const FeatureExtractorSpec& spec() const { return spec_; }

 private:
  FeatureExtractorSpec spec_;
};

GrayImage LuminanceImage(const render::ColorImage& image);
GrayImage GaussianBlur(const GrayImage& image, double sigma);
/// Keeps pixels (2u, 2v); output size is ceil(w/2) x ceil(h/2).
GrayImage Downsample2(const GrayImage& image);

/// Sum over levels of the mean per-pixel L2 distance between the two
/// feature maps. Throws PreconditionError on a size mismatch.
double PerceptualDistance(const render::ColorImage& rendered,
                          const render::ColorImage& observed,
                          const FeatureExtractor& extractor);

double PerceptualDistance(const render::ColorImage& rendered,
                          const render::ColorImage& observed,
                          const FeatureExtractorSpec& spec = {});

}  // namespace binpose::selection
