#include "binpose/selection/perceptual.h"

#include <algorithm>
#include <cmath>

#include "binpose/errors.h"

namespace binpose::selection {

void FeatureExtractorSpec::Validate() const {
  if (levels < 1) throw PreconditionError("FeatureExtractorSpec: levels must be >= 1");
  if (!(sigma > 0.0)) throw PreconditionError("FeatureExtractorSpec: sigma must be > 0");
  if (!(epsilon > 0.0)) throw PreconditionError("FeatureExtractorSpec: epsilon must be > 0");
}

GrayImage LuminanceImage(const render::ColorImage& image) {
  GrayImage out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const render::Rgb& c = image.data()[i];
    out.data()[i] = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
  }
  return out;
}

GrayImage GaussianBlur(const GrayImage& image, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    total += kernel[k + radius];
  }
  for (double& k : kernel) k /= total;

  const int w = image.width(), h = image.height();
  GrayImage tmp(w, h), out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        s += kernel[k + radius] * image.at(std::clamp(u + k, 0, w - 1), v);
      }
      tmp.at(u, v) = s;
    }
  }
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        s += kernel[k + radius] * tmp.at(u, std::clamp(v + k, 0, h - 1));
      }
      out.at(u, v) = s;
    }
  }
  return out;
}

GrayImage Downsample2(const GrayImage& image) {
  GrayImage out((image.width() + 1) / 2, (image.height() + 1) / 2);
  for (int v = 0; v < out.height(); ++v) {
    for (int u = 0; u < out.width(); ++u) out.at(u, v) = image.at(2 * u, 2 * v);
  }
  return out;
}

namespace {

FeatureMap LevelFeatures(const GrayImage& lum, double epsilon) {
  const int w = lum.width(), h = lum.height();
  FeatureMap map{w, h, 3, std::vector<double>(static_cast<std::size_t>(w) * h * 3)};
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double l = lum.at(u, v);
      const double gx =
          0.5 * (lum.at(std::min(u + 1, w - 1), v) - lum.at(std::max(u - 1, 0), v));
      const double gy =
          0.5 * (lum.at(u, std::min(v + 1, h - 1)) - lum.at(u, std::max(v - 1, 0)));
      const double norm = std::sqrt(l * l + gx * gx + gy * gy);
      const double scale = 1.0 / std::max(norm, epsilon);
      double* f = map.values.data() + (static_cast<std::size_t>(v) * w + u) * 3;
      f[0] = l * scale;
      f[1] = gx * scale;
      f[2] = gy * scale;
    }
  }
  return map;
}

}  // namespace

PyramidFeatureExtractor::PyramidFeatureExtractor(FeatureExtractorSpec spec)
    : spec_(spec) {
  spec_.Validate();
}

std::vector<FeatureMap> PyramidFeatureExtractor::Extract(
    const render::ColorImage& image) const {
  std::vector<FeatureMap> levels;
  levels.reserve(spec_.levels);
  GrayImage lum = LuminanceImage(image);
  for (int l = 0; l < spec_.levels; ++l) {
    if (l > 0) lum = Downsample2(GaussianBlur(lum, spec_.sigma));
    levels.push_back(LevelFeatures(lum, spec_.epsilon));
  }
  return levels;
}

double PerceptualDistance(const render::ColorImage& rendered,
                          const render::ColorImage& observed,
                          const FeatureExtractor& extractor) {
  if (rendered.width() != observed.width() || rendered.height() != observed.height()) {
    throw PreconditionError("PerceptualDistance: image sizes differ");
  }
  if (rendered.empty()) throw PreconditionError("PerceptualDistance: empty images");
  const auto fr = extractor.Extract(rendered);
  const auto fo = extractor.Extract(observed);
  double total = 0.0;
  for (std::size_t l = 0; l < fr.size(); ++l) {
    const FeatureMap& a = fr[l];
    const FeatureMap& b = fo[l];
    const std::size_t pixels = static_cast<std::size_t>(a.width) * a.height;
    double level_sum = 0.0;
    for (std::size_t q = 0; q < pixels; ++q) {
      double d2 = 0.0;
      for (int c = 0; c < a.channels; ++c) {
        const double d = a.values[q * a.channels + c] - b.values[q * b.channels + c];
        d2 += d * d;
      }
      level_sum += std::sqrt(d2);
    }
    total += level_sum / static_cast<double>(pixels);
  }
  return total;
}

double PerceptualDistance(const render::ColorImage& rendered,
                          const render::ColorImage& observed,
                          const FeatureExtractorSpec& spec) {
  return PerceptualDistance(rendered, observed, PyramidFeatureExtractor(spec));
}

}  // namespace binpose::selection
