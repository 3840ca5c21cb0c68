#include "binpose/render/image_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace binpose::render {

PixelBox MaskBounds(const Mask& mask) {
  PixelBox box{mask.width(), mask.height(), -1, -1};
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < mask.width(); ++u) {
      if (!mask.at(u, v)) continue;
      box.u0 = std::min(box.u0, u);
      box.v0 = std::min(box.v0, v);
      box.u1 = std::max(box.u1, u);
      box.v1 = std::max(box.v1, v);
    }
  }
  return box;
}

std::size_t CountForeground(const Mask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.data().begin(), mask.data().end(),
                    [](std::uint8_t m) { return m != 0; }));
}

float Luminance(const Rgb& c) {
  return 0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2];
}

ColorImage ToFloat(const ColorImage8& image) {
  ColorImage out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const Rgb8& p = image.data()[i];
    out.data()[i] = {p[0] / 255.f, p[1] / 255.f, p[2] / 255.f};
  }
  return out;
}

ColorImage8 ToBytes(const ColorImage& image) {
  ColorImage8 out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const float x = std::clamp(image.data()[i][c], 0.f, 1.f);
      out.data()[i][c] = static_cast<std::uint8_t>(std::lround(x * 255.f));
    }
  }
  return out;
}

namespace {

struct Header {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
};

void SkipSpaceAndComments(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
      in.get();
    } else {
      return;
    }
  }
}

Header ReadHeader(std::istream& in, const std::filesystem::path& path) {
  Header h;
  in >> h.magic;
  SkipSpaceAndComments(in);
  in >> h.width;
  SkipSpaceAndComments(in);
  in >> h.height;
  SkipSpaceAndComments(in);
  in >> h.maxval;
  if (!in || h.width <= 0 || h.height <= 0) {
    throw DataError(path.string(), "malformed Netpbm header");
  }
  in.get();  // single whitespace byte before the raster
  return h;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), "cannot open");
  return in;
}

void ReadRaster(std::istream& in, char* dst, std::size_t bytes,
                const std::filesystem::path& path) {
  in.read(dst, static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw DataError(path.string(), "truncated raster");
  }
}

}  // namespace

void WritePpm(const ColorImage8& image, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.size() * 3));
  if (!out) throw DataError(path.string(), "write failed");
}

ColorImage8 ReadPpm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const Header h = ReadHeader(in, path);
  if (h.magic != "P6" || h.maxval != 255) {
    throw DataError(path.string(), "expected P6 with maxval 255");
  }
  ColorImage8 image(h.width, h.height);
  ReadRaster(in, reinterpret_cast<char*>(image.data().data()), image.size() * 3, path);
  return image;
}

void WritePgm16(const DepthMm& depth, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << "P5\n" << depth.width() << ' ' << depth.height() << "\n65535\n";
  std::vector<char> raster(depth.size() * 2);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    raster[2 * i] = static_cast<char>(depth.data()[i] >> 8);
    raster[2 * i + 1] = static_cast<char>(depth.data()[i] & 0xff);
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw DataError(path.string(), "write failed");
}

DepthMm ReadPgm16(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const Header h = ReadHeader(in, path);
  if (h.magic != "P5" || h.maxval != 65535) {
    throw DataError(path.string(), "expected P5 with maxval 65535");
  }
  DepthMm depth(h.width, h.height);
  std::vector<unsigned char> raster(depth.size() * 2);
  ReadRaster(in, reinterpret_cast<char*>(raster.data()), raster.size(), path);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    depth.data()[i] = static_cast<std::uint16_t>((raster[2 * i] << 8) | raster[2 * i + 1]);
  }
  return depth;
}

void WriteMaskPgm(const Mask& mask, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::vector<char> raster(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    raster[i] = static_cast<char>(mask.data()[i] ? 255 : 0);
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw DataError(path.string(), "write failed");
}

Mask ReadMaskPgm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const Header h = ReadHeader(in, path);
  if (h.magic != "P5" || h.maxval != 255) {
    throw DataError(path.string(), "expected P5 with maxval 255");
  }
  Mask mask(h.width, h.height);
  ReadRaster(in, reinterpret_cast<char*>(mask.data().data()), mask.size(), path);
  for (auto& m : mask.data()) m = m ? 1 : 0;
  return mask;
}

}  // namespace binpose::render
