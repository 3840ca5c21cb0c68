#pragma once

#include <vector>

#include <Eigen/Core>

#include "binpose/geometry/object_model.h"

namespace binpose::simdata {

/// Prism over a simple counter-clockwise polygon in the xy-plane, spanning
/// z in [-thickness/2, thickness/2]. Caps are ear-clipped.
geometry::TriangleMesh ExtrudePolygon(const std::vector<Eigen::Vector2d>& polygon,
                                      double thickness);

/// Shifts vertices so the bounding-box centre sits at the origin.
void CenterMesh(geometry::TriangleMesh& mesh);

/// L-shaped bracket with unequal arms; no rotational symmetry.
geometry::TriangleMesh MakeBracketMesh();

/// Hexagonal prism (nut blank); treated as symmetric.
geometry::TriangleMesh MakeHexNutMesh();

/// Axis-aligned box centred at the origin.
geometry::TriangleMesh MakeBoxMesh(const geometry::Vec3& extents);

/// The two reference objects: "bracket" (asymmetric) and "nut" (symmetric).
std::vector<geometry::ObjectModel> ReferenceObjects();

}  // namespace binpose::simdata
