#include "binpose/geometry/anchors.h"

#include <array>
#include <cmath>

namespace binpose::geometry {

namespace {

// Unit quaternions of the binary icosahedral group, reduced modulo sign.
std::vector<Pose> BuildAnchors() {
  std::vector<Quat> quats;
  auto add = [&](double w, double x, double y, double z) {
    const Quat q = CanonicalQuaternion(Quat(w, x, y, z).normalized());
    for (const Quat& e : quats) {
      if (std::abs(std::abs(e.dot(q)) - 1.0) < 1e-12) return;
    }
    quats.push_back(q);
  };

  add(1, 0, 0, 0);
  add(0, 1, 0, 0);
  add(0, 0, 1, 0);
  add(0, 0, 0, 1);
  for (int s = 0; s < 16; ++s) {
    add(s & 1 ? -0.5 : 0.5, s & 2 ? -0.5 : 0.5, s & 4 ? -0.5 : 0.5,
        s & 8 ? -0.5 : 0.5);
  }

  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const std::array<double, 4> base = {0.0, 0.5, 0.5 / phi, 0.5 * phi};
  // The 12 even permutations of four positions.
  static constexpr int kEven[12][4] = {
      {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2},
      {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 1, 3, 0},
      {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}};
  for (const auto& perm : kEven) {
    for (int s = 0; s < 8; ++s) {
      std::array<double, 4> v{};
      for (int k = 0; k < 4; ++k) v[perm[k]] = base[k];
      // Signs on the three non-zero entries (base[1..3]).
      v[perm[1]] *= (s & 1) ? -1.0 : 1.0;
      v[perm[2]] *= (s & 2) ? -1.0 : 1.0;
      v[perm[3]] *= (s & 4) ? -1.0 : 1.0;
      add(v[0], v[1], v[2], v[3]);
    }
  }

  std::vector<Pose> poses;
  poses.reserve(quats.size());
  for (const Quat& q : quats) poses.emplace_back(q, Vec3::Zero());
  return poses;
}

}  // namespace

const std::vector<Pose>& IcosahedralRotationAnchors() {
  static const std::vector<Pose> anchors = BuildAnchors();
  return anchors;
}

}  // namespace binpose::geometry
