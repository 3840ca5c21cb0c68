#pragma once

#include <filesystem>

#include "binpose/geometry/object_model.h"
#include "binpose/geometry/point_cloud.h"

namespace binpose::geometry {

// Formats are described in docs/file_formats.md.

TriangleMesh ReadObj(const std::filesystem::path& path);
void WriteObj(const TriangleMesh& mesh, const std::filesystem::path& path);

PointCloud ReadPly(const std::filesystem::path& path);
void WritePly(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace binpose::geometry
