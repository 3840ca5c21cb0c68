#include "binpose/simdata/scene_generator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "binpose/errors.h"
#include "binpose/simdata/dataset.h"

namespace binpose::simdata {

using geometry::Quat;

void BinSpec::Validate(const CameraIntrinsics& cam) const {
  if (!(extents.minCoeff() > 0.0) || !(wall_thickness >= 0.0)) {
    throw PreconditionError("BinSpec: extents must be positive");
  }
  if (min_instances < 1 || max_instances < min_instances) {
    throw PreconditionError("BinSpec: instance range must satisfy 1 <= min <= max");
  }
  cam.Validate();
  const double hx = 0.5 * extents.x(), hy = 0.5 * extents.y();
  for (int i = 0; i < 8; ++i) {
    const Vec3 corner((i & 1) ? hx : -hx, (i & 2) ? hy : -hy, (i & 4) ? extents.z() : 0.0);
    const Vec3 c = camera_from_bin * corner;
    if (!(c.z() > 0.0)) throw PreconditionError("BinSpec: bin corner behind the camera");
    const Eigen::Vector2d p = cam.Project(c);
    if (p.x() < 0.0 || p.y() < 0.0 || p.x() > cam.width || p.y() > cam.height) {
      throw PreconditionError("BinSpec: bin corner projects outside the image");
    }
  }
}

BinSpec BinSpec::FromJson(const nlohmann::json& j) {
  BinSpec b;
  if (j.contains("extents")) {
    const auto e = j.at("extents").get<std::vector<double>>();
    if (e.size() != 3) throw ConfigError("bin.extents must have 3 entries");
    b.extents = Vec3(e[0], e[1], e[2]);
  }
  b.wall_thickness = j.value("wall_thickness", b.wall_thickness);
  if (j.contains("camera_from_bin")) b.camera_from_bin = PoseFromJson(j.at("camera_from_bin"));
  if (j.contains("instances")) {
    const auto r = j.at("instances").get<std::vector<int>>();
    if (r.size() != 2) throw ConfigError("bin.instances must be [min, max]");
    b.min_instances = r[0];
    b.max_instances = r[1];
  }
  return b;
}

nlohmann::json BinSpec::ToJson() const {
  return {{"extents", {extents.x(), extents.y(), extents.z()}},
          {"wall_thickness", wall_thickness},
          {"camera_from_bin", PoseToJson(camera_from_bin)},
          {"instances", {min_instances, max_instances}}};
}

void ShiftSpec::Validate() const {
  if (!(depth_noise_sigma >= 0.0)) throw PreconditionError("ShiftSpec: sigma must be >= 0");
  if (!(depth_dropout >= 0.0 && depth_dropout <= 1.0)) {
    throw PreconditionError("ShiftSpec: dropout must lie in [0, 1]");
  }
  if (mask_erosion_radius < 0) throw PreconditionError("ShiftSpec: negative erosion radius");
  if (!(brightness_min <= brightness_max) || !(contrast_min <= contrast_max) ||
      !(contrast_min >= 0.0)) {
    throw PreconditionError("ShiftSpec: bad brightness/contrast range");
  }
  if (!(light_jitter_deg >= 0.0 && light_jitter_deg <= 180.0)) {
    throw PreconditionError("ShiftSpec: light jitter must lie in [0, 180] degrees");
  }
}

bool ShiftSpec::IsIdentity() const {
  return depth_noise_sigma == 0.0 && depth_dropout == 0.0 && mask_erosion_radius == 0 &&
         brightness_min == 0.0 && brightness_max == 0.0 && contrast_min == 1.0 &&
         contrast_max == 1.0;
}

ShiftSpec ShiftSpec::FromJson(const nlohmann::json& j) {
  ShiftSpec s;
  s.depth_noise_sigma = j.value("depth_noise_sigma", s.depth_noise_sigma);
  s.depth_dropout = j.value("depth_dropout", s.depth_dropout);
  s.mask_erosion_radius = j.value("mask_erosion_radius", s.mask_erosion_radius);
  if (j.contains("brightness")) {
    const auto r = j.at("brightness").get<std::vector<double>>();
    if (r.size() != 2) throw ConfigError("shift.brightness must be [min, max]");
    s.brightness_min = r[0];
    s.brightness_max = r[1];
  }
  if (j.contains("contrast")) {
    const auto r = j.at("contrast").get<std::vector<double>>();
    if (r.size() != 2) throw ConfigError("shift.contrast must be [min, max]");
    s.contrast_min = r[0];
    s.contrast_max = r[1];
  }
  s.light_jitter_deg = j.value("light_jitter_deg", s.light_jitter_deg);
  return s;
}

nlohmann::json ShiftSpec::ToJson() const {
  return {{"depth_noise_sigma", depth_noise_sigma},
          {"depth_dropout", depth_dropout},
          {"mask_erosion_radius", mask_erosion_radius},
          {"brightness", {brightness_min, brightness_max}},
          {"contrast", {contrast_min, contrast_max}},
          {"light_jitter_deg", light_jitter_deg}};
}

const std::vector<Pose>& Scene::labels() const {
  if (!labels_) throw AccessError("scene " + scene_id + ": ground-truth poses are withheld");
  return *labels_;
}

render::DepthMap Scene::DepthMeters() const {
  render::DepthMap out(depth.width(), depth.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = depth.data()[i] * 1e-3;
  return out;
}

geometry::PointCloud Backproject(const render::DepthMap& depth,
                                 const CameraIntrinsics& intrinsics,
                                 const render::Mask& mask) {
  if (depth.width() != mask.width() || depth.height() != mask.height() ||
      depth.width() != intrinsics.width || depth.height() != intrinsics.height) {
    throw PreconditionError("Backproject: depth, mask and intrinsics sizes differ");
  }
  geometry::PointCloud cloud;
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const double z = depth.at(u, v);
      if (!mask.at(u, v) || !(z > 0.0)) continue;
      cloud.points.emplace_back((u + 0.5 - intrinsics.cx) * z / intrinsics.fx,
                                (v + 0.5 - intrinsics.cy) * z / intrinsics.fy, z);
    }
  }
  return cloud;
}

Quat UniformRotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u1 = uni(rng), u2 = uni(rng), u3 = uni(rng);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double tau = 2.0 * std::numbers::pi;
  return Quat(b * std::cos(tau * u3), a * std::sin(tau * u2), a * std::cos(tau * u2),
              b * std::sin(tau * u3));
}

render::LightSpec JitterLight(const render::LightSpec& light, double degrees,
                              std::mt19937_64& rng) {
  if (degrees <= 0.0) return light;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
  axis -= axis.dot(light.direction) * light.direction;
  const double angle = uni(rng) * degrees * std::numbers::pi / 180.0;
  render::LightSpec out = light;
  if (axis.norm() < 1e-12) return out;
  out.direction = (Eigen::AngleAxisd(angle, axis.normalized()) * light.direction).normalized();
  return out;
}

geometry::TriangleMesh MakeBinMesh(const BinSpec& bin) {
  const double x = 0.5 * bin.extents.x(), y = 0.5 * bin.extents.y(), z = bin.extents.z();
  geometry::TriangleMesh mesh;
  auto quad = [&mesh](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const int base = static_cast<int>(mesh.vertices.size());
    mesh.vertices.insert(mesh.vertices.end(), {a, b, c, d});
    mesh.triangles.push_back({base, base + 1, base + 2});
    mesh.triangles.push_back({base, base + 2, base + 3});
  };
  quad({-x, -y, 0}, {x, -y, 0}, {x, y, 0}, {-x, y, 0});
  quad({-x, -y, 0}, {-x, -y, z}, {x, -y, z}, {x, -y, 0});
  quad({x, -y, 0}, {x, -y, z}, {x, y, z}, {x, y, 0});
  quad({x, y, 0}, {x, y, z}, {-x, y, z}, {-x, y, 0});
  quad({-x, y, 0}, {-x, y, z}, {-x, -y, z}, {-x, -y, 0});
  return mesh;
}

Scene GenerateScene(std::span<const geometry::ObjectModel> models, const BinSpec& bin,
                    const CameraIntrinsics& cam, std::uint64_t seed,
                    const SceneOptions& options) {
  if (models.empty()) throw PreconditionError("GenerateScene: no models");
  bin.Validate(cam);
  options.light.Validate();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count_dist(bin.min_instances, bin.max_instances);
  std::uniform_int_distribution<std::size_t> model_dist(0, models.size() - 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int requested = count_dist(rng);
  const double keep = 1.0 - options.penetration_fraction;
  const double hx = 0.5 * bin.extents.x(), hy = 0.5 * bin.extents.y();

  struct Placed {
    std::size_t model;
    Vec3 center;
    double radius;
    Quat rotation;
  };
  std::vector<Placed> placed;
  int rejections = 0;
  while (static_cast<int>(placed.size()) < requested) {
    const std::size_t m = model_dist(rng);
    const Vec3 p((2.0 * uni(rng) - 1.0) * hx, (2.0 * uni(rng) - 1.0) * hy,
                 uni(rng) * bin.extents.z());
    const Quat q = UniformRotation(rng);
    const double r = models[m].BoundingRadius();
    bool ok = std::min({p.x() + hx, hx - p.x(), p.y() + hy, hy - p.y(), p.z()}) >= keep * r;
    for (const Placed& other : placed) {
      if (!ok) break;
      ok = (p - other.center).norm() >= keep * (r + other.radius);
    }
    if (ok) {
      placed.push_back({m, p, r, q});
    } else if (++rejections >= options.max_rejections) {
      throw CapacityError("GenerateScene: placed " + std::to_string(placed.size()) +
                              " of " + std::to_string(requested) + " instances",
                          static_cast<int>(placed.size()));
    }
  }

  Scene scene;
  scene.seed = seed;
  scene.intrinsics = cam;
  std::vector<Pose> poses;
  std::vector<render::RenderInstance> instances;
  for (const Placed& pl : placed) {
    const geometry::ObjectModel& model = models[pl.model];
    const Pose pose = bin.camera_from_bin * Pose(pl.rotation, pl.center);
    const auto it = options.albedo.find(model.id);
    const Vec3 base = it != options.albedo.end() ? it->second : options.light.albedo;
    const double factor = 1.0 + options.albedo_jitter * (2.0 * uni(rng) - 1.0);
    poses.push_back(pose);
    scene.object_ids.push_back(model.id);
    instances.push_back({&model.mesh, pose, (base * factor).cwiseMin(1.0).cwiseMax(0.0)});
  }
  const geometry::TriangleMesh bin_mesh = MakeBinMesh(bin);
  if (options.render_bin) instances.push_back({&bin_mesh, bin.camera_from_bin, options.bin_albedo});

  render::SceneRenderOutput out = render::RenderScene(instances, cam, options.light);
  scene.image = render::ToBytes(out.combined.image);
  scene.depth = render::DepthMm(cam.width, cam.height);
  for (std::size_t i = 0; i < scene.depth.size(); ++i) {
    const double mm = std::round(out.combined.depth.data()[i] * 1000.0);
    scene.depth.data()[i] = static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
  }
  out.instance_masks.resize(placed.size());
  scene.masks = std::move(out.instance_masks);
  scene.set_labels(std::move(poses));
  return scene;
}

}  // namespace binpose::simdata
