#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "binpose/errors.h"

namespace binpose::render {

/// Row-major width x height buffer, top-left origin.
template <typename T>
class Buffer2D {
 public:
  Buffer2D() = default;
  Buffer2D(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 0 || height < 0) throw PreconditionError("Buffer2D: negative size");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int u, int v) { return data_[static_cast<std::size_t>(v) * width_ + u]; }
  const T& at(int u, int v) const {
    return data_[static_cast<std::size_t>(v) * width_ + u];
  }
  bool contains(int u, int v) const {
    return u >= 0 && v >= 0 && u < width_ && v < height_;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Buffer2D&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Rgb = std::array<float, 3>;
using Rgb8 = std::array<std::uint8_t, 3>;

/// Float colour image, channels in [0, 1].
using ColorImage = Buffer2D<Rgb>;
/// 8-bit colour image as stored on disk.
using ColorImage8 = Buffer2D<Rgb8>;
/// Binary mask, 0 or 1 per pixel.
using Mask = Buffer2D<std::uint8_t>;
/// Depth in metres, 0 where nothing was hit.
using DepthMap = Buffer2D<double>;
/// Depth in millimetres as stored on disk, 0 = invalid.
using DepthMm = Buffer2D<std::uint16_t>;

/// Pixel-inclusive bounding box.
struct PixelBox {
  int u0 = 0, v0 = 0, u1 = -1, v1 = -1;
  bool empty() const { return u1 < u0 || v1 < v0; }
  int width() const { return empty() ? 0 : u1 - u0 + 1; }
  int height() const { return empty() ? 0 : v1 - v0 + 1; }
};

PixelBox MaskBounds(const Mask& mask);
std::size_t CountForeground(const Mask& mask);

template <typename T>
Buffer2D<T> CropBuffer(const Buffer2D<T>& src, const PixelBox& box) {
  Buffer2D<T> out(box.width(), box.height());
  for (int v = 0; v < out.height(); ++v) {
    for (int u = 0; u < out.width(); ++u) out.at(u, v) = src.at(box.u0 + u, box.v0 + v);
  }
  return out;
}

float Luminance(const Rgb& c);
ColorImage ToFloat(const ColorImage8& image);
ColorImage8 ToBytes(const ColorImage& image);

}  // namespace binpose::render
