#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "binpose/geometry/point_cloud.h"

namespace binpose::geometry {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  /// Throws PreconditionError on out-of-range indices or non-finite vertices.
  void Validate() const;
};

/// Rigid CAD model: mesh, surface samples used by the metrics, diameter and
/// the symmetry flag that selects ADD-S and the symmetric ShapeMatch loss.
struct ObjectModel {
  std::string id;
  TriangleMesh mesh;
  PointCloud model_points;
  double diameter = 0.0;
  bool symmetric = false;

  static constexpr int kDefaultPointCount = 512;
  static constexpr std::uint64_t kDefaultSamplingSeed = 7;

  static ObjectModel FromMesh(std::string id, TriangleMesh mesh, bool symmetric,
                              int point_count = kDefaultPointCount,
                              std::uint64_t seed = kDefaultSamplingSeed);

  /// Radius of the bounding sphere centred at the model origin.
  double BoundingRadius() const;
};

/// Maximum pairwise vertex distance.
double MeshDiameter(const TriangleMesh& mesh);

/// Area-weighted uniform samples on the mesh surface.
PointCloud SampleSurface(const TriangleMesh& mesh, int count, std::uint64_t seed);

}  // namespace binpose::geometry
