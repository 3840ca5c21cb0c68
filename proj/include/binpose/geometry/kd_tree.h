#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "binpose/geometry/types.h"

namespace binpose::geometry {

/// Static 3-d tree for exact nearest-neighbour queries. Among equidistant
/// points the lowest input index is returned, so results match a brute-force
/// scan that keeps the first minimum.
class KdTree {
 public:
  struct Neighbor {
    std::size_t index = 0;
    double distance_sq = 0.0;
  };

  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

  /// Precondition: tree is non-empty.
  Neighbor Nearest(const Vec3& query) const;

 private:
  struct Node {
    // Leaf when axis < 0: [begin, end) into order_.
    int axis = -1;
    double split = 0.0;
    std::uint32_t begin = 0, end = 0;
    std::int32_t left = -1, right = -1;
  };

  std::int32_t Build(std::uint32_t begin, std::uint32_t end);
  void Search(std::int32_t node, const Vec3& q, Neighbor& best) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace binpose::geometry
