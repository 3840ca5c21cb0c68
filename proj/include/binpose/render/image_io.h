#pragma once

#include <filesystem>

#include "binpose/render/image.h"

namespace binpose::render {

// Binary Netpbm. See docs/file_formats.md.

void WritePpm(const ColorImage8& image, const std::filesystem::path& path);
ColorImage8 ReadPpm(const std::filesystem::path& path);

/// 16-bit big-endian P5, maxval 65535.
void WritePgm16(const DepthMm& depth, const std::filesystem::path& path);
DepthMm ReadPgm16(const std::filesystem::path& path);

/// 8-bit P5, maxval 255, foreground written as 255.
void WriteMaskPgm(const Mask& mask, const std::filesystem::path& path);
Mask ReadMaskPgm(const std::filesystem::path& path);

}  // namespace binpose::render
