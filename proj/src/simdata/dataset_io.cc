#include "binpose/simdata/dataset.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "binpose/errors.h"
#include "binpose/geometry/mesh_io.h"
#include "binpose/render/image_io.h"
#include "binpose/simdata/domain_shift.h"
#include "binpose/util/random.h"

namespace binpose::simdata {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kUnlabeledOffset = 1'000'000;
constexpr std::uint64_t kEvalOffset = 2'000'000;

std::string SceneId(const char* prefix, int i) {
  std::ostringstream os;
  os << prefix << '_' << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

std::string MaskName(std::size_t k) {
  std::ostringstream os;
  os << "mask_" << std::setw(2) << std::setfill('0') << k << ".pgm";
  return os.str();
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), "cannot open");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string(), e.what());
  }
}

void WriteJsonFile(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw DataError(path.string(), "write failed");
}

}  // namespace

json PoseToJson(const Pose& pose) {
  const geometry::Quat& q = pose.rotation();
  const Vec3& t = pose.translation();
  return {{"quat", {q.w(), q.x(), q.y(), q.z()}}, {"t", {t.x(), t.y(), t.z()}}};
}

Pose PoseFromJson(const json& j) {
  const auto q = j.at("quat").get<std::vector<double>>();
  const auto t = j.at("t").get<std::vector<double>>();
  if (q.size() != 4 || t.size() != 3) throw PreconditionError("pose needs quat[4] and t[3]");
  return Pose(geometry::Quat(q[0], q[1], q[2], q[3]), Vec3(t[0], t[1], t[2]));
}

json IntrinsicsToJson(const CameraIntrinsics& cam) {
  return {{"fx", cam.fx}, {"fy", cam.fy},       {"cx", cam.cx},
          {"cy", cam.cy}, {"width", cam.width}, {"height", cam.height}};
}

CameraIntrinsics IntrinsicsFromJson(const json& j) {
  CameraIntrinsics cam;
  cam.fx = j.value("fx", cam.fx);
  cam.fy = j.value("fy", cam.fy);
  cam.cx = j.value("cx", cam.cx);
  cam.cy = j.value("cy", cam.cy);
  cam.width = j.value("width", cam.width);
  cam.height = j.value("height", cam.height);
  return cam;
}

const geometry::ObjectModel& Dataset::object(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return o;
  }
  throw PreconditionError("unknown object id '" + id + "'");
}

const Scene& Dataset::scene(const std::string& id) const {
  for (const auto& s : scenes) {
    if (s.scene_id == id) return s;
  }
  throw PreconditionError("unknown scene id '" + id + "'");
}

std::vector<const Scene*> Dataset::Split(const std::string& name) const {
  std::vector<const Scene*> out;
  const auto it = splits.find(name);
  if (it == splits.end()) return out;
  for (const auto& id : it->second) out.push_back(&scene(id));
  return out;
}

ShiftSpec DatasetSpec::DefaultShift() {
  ShiftSpec s;
  s.depth_noise_sigma = 0.002;
  s.depth_dropout = 0.05;
  s.mask_erosion_radius = 1;
  s.brightness_min = -0.12;
  s.brightness_max = 0.12;
  s.contrast_min = 0.75;
  s.contrast_max = 1.25;
  s.light_jitter_deg = 30.0;
  return s;
}

SceneOptions DatasetSpec::DefaultSceneOptions() {
  SceneOptions o;
  o.albedo["bracket"] = Vec3(0.80, 0.55, 0.30);
  o.albedo["nut"] = Vec3(0.55, 0.65, 0.80);
  return o;
}

DatasetSpec DatasetSpec::FromJson(const json& j) {
  DatasetSpec s;
  s.synthetic_scenes = j.value("synthetic_scenes", s.synthetic_scenes);
  s.unlabeled_scenes = j.value("unlabeled_scenes", s.unlabeled_scenes);
  s.eval_scenes = j.value("eval_scenes", s.eval_scenes);
  if (j.contains("intrinsics")) s.intrinsics = IntrinsicsFromJson(j.at("intrinsics"));
  if (j.contains("bin")) s.bin = BinSpec::FromJson(j.at("bin"));
  if (j.contains("shift")) s.shift = ShiftSpec::FromJson(j.at("shift"));
  s.scene.albedo_jitter = j.value("albedo_jitter", s.scene.albedo_jitter);
  s.seed = j.value("seed", s.seed);
  if (s.synthetic_scenes < 0 || s.unlabeled_scenes < 0 || s.eval_scenes < 0) {
    throw ConfigError("scene counts must be non-negative");
  }
  return s;
}

json DatasetSpec::ToJson() const {
  return {{"synthetic_scenes", synthetic_scenes},
          {"unlabeled_scenes", unlabeled_scenes},
          {"eval_scenes", eval_scenes},
          {"intrinsics", IntrinsicsToJson(intrinsics)},
          {"bin", bin.ToJson()},
          {"shift", shift.ToJson()},
          {"albedo_jitter", scene.albedo_jitter},
          {"seed", seed}};
}

Dataset GenerateDataset(const DatasetSpec& spec, std::vector<geometry::ObjectModel> objects) {
  spec.shift.Validate();
  Dataset ds;
  ds.objects = std::move(objects);
  ds.intrinsics = spec.intrinsics;

  auto add_split = [&](const char* split, const char* prefix, int count,
                       std::uint64_t offset, bool shifted) {
    auto& ids = ds.splits[split];
    for (int i = 0; i < count; ++i) {
      const std::uint64_t seed = util::DeriveSeed(spec.seed, offset + i);
      SceneOptions options = spec.scene;
      if (shifted) {
        std::mt19937_64 light_rng(util::DeriveSeed(seed, 2));
        options.light = JitterLight(options.light, spec.shift.light_jitter_deg, light_rng);
      }
      Scene scene = GenerateScene(ds.objects, spec.bin, spec.intrinsics, seed, options);
      scene.scene_id = SceneId(prefix, i);
      if (shifted) scene = DomainShift(scene, spec.shift, util::DeriveSeed(seed, 1), ds.withheld);
      ids.push_back(scene.scene_id);
      ds.scenes.push_back(std::move(scene));
    }
  };
  add_split(kSyntheticSplit, "syn", spec.synthetic_scenes, 0, false);
  add_split(kUnlabeledSplit, "unl", spec.unlabeled_scenes, kUnlabeledOffset, true);
  add_split(kEvalSplit, "evl", spec.eval_scenes, kEvalOffset, true);
  return ds;
}

void WriteDataset(const Dataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "objects", ec);
  fs::create_directories(dir / "scenes", ec);
  if (ec) throw DataError(dir.string(), "cannot create directory: " + ec.message());

  json objects = json::array();
  for (const auto& o : dataset.objects) {
    const std::string file = "objects/" + o.id + ".obj";
    geometry::WriteObj(o.mesh, dir / file);
    objects.push_back({{"id", o.id},
                       {"obj_file", file},
                       {"diameter", o.diameter},
                       {"symmetric", o.symmetric},
                       {"model_points", o.model_points.size()},
                       {"sampling_seed", geometry::ObjectModel::kDefaultSamplingSeed}});
  }

  json scenes = json::array();
  for (const Scene& s : dataset.scenes) {
    const std::string rel = "scenes/" + s.scene_id + "/";
    fs::create_directories(dir / rel, ec);
    if (ec) throw DataError((dir / rel).string(), "cannot create directory");
    render::WritePpm(s.image, dir / (rel + "image.ppm"));
    render::WritePgm16(s.depth, dir / (rel + "depth.pgm"));
    json masks = json::array();
    render::Mask all(s.depth.width(), s.depth.height(), 1);
    for (std::size_t k = 0; k < s.masks.size(); ++k) {
      render::WriteMaskPgm(s.masks[k], dir / (rel + MaskName(k)));
      masks.push_back(rel + MaskName(k));
    }
    geometry::WritePly(Backproject(s.DepthMeters(), s.intrinsics, all),
                       dir / (rel + "cloud.ply"));
    json instances = json::array();
    for (std::size_t k = 0; k < s.instance_count(); ++k) {
      json inst = {{"object_id", s.object_ids[k]}};
      if (s.has_labels()) inst["pose"] = PoseToJson(s.labels()[k]);
      instances.push_back(inst);
    }
    scenes.push_back({{"scene_id", s.scene_id},
                      {"seed", s.seed},
                      {"labeled", s.has_labels()},
                      {"files",
                       {{"image", rel + "image.ppm"},
                        {"depth", rel + "depth.pgm"},
                        {"masks", masks},
                        {"cloud", rel + "cloud.ply"}}},
                      {"instances", instances}});
  }

  json gt = json::object();
  for (const auto& [id, poses] : dataset.withheld) {
    json list = json::array();
    for (std::size_t k = 0; k < poses.size(); ++k) {
      list.push_back({{"instance", k}, {"pose", PoseToJson(poses[k])}});
    }
    gt[id] = list;
  }
  WriteJsonFile(gt, dir / "gt.json");

  json splits = json::object();
  for (const char* name : {kSyntheticSplit, kUnlabeledSplit, kEvalSplit}) {
    const auto it = dataset.splits.find(name);
    splits[name] = it == dataset.splits.end() ? std::vector<std::string>{} : it->second;
  }
  const json manifest = {{"version", kManifestVersion},
                         {"objects", objects},
                         {"intrinsics", IntrinsicsToJson(dataset.intrinsics)},
                         {"splits", splits},
                         {"scenes", scenes}};
  WriteJsonFile(manifest, dir / "manifest.json");
}

Dataset ReadDataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  const json m = ReadJsonFile(manifest_path);
  const std::string mf = manifest_path.string();
  Dataset ds;
  try {
    if (m.at("version").get<int>() != kManifestVersion) {
      throw DataError(mf, "unsupported manifest version");
    }
    ds.intrinsics = IntrinsicsFromJson(m.at("intrinsics"));
    for (const auto& o : m.at("objects")) {
      geometry::TriangleMesh mesh = geometry::ReadObj(dir / o.at("obj_file").get<std::string>());
      ds.objects.push_back(geometry::ObjectModel::FromMesh(
          o.at("id").get<std::string>(), std::move(mesh), o.at("symmetric").get<bool>(),
          o.value("model_points", geometry::ObjectModel::kDefaultPointCount),
          o.value("sampling_seed", geometry::ObjectModel::kDefaultSamplingSeed)));
    }
    for (const auto& sj : m.at("scenes")) {
      Scene s;
      s.scene_id = sj.at("scene_id").get<std::string>();
      s.seed = sj.at("seed").get<std::uint64_t>();
      s.intrinsics = ds.intrinsics;
      const json& files = sj.at("files");
      const fs::path image_path = dir / files.at("image").get<std::string>();
      const fs::path depth_path = dir / files.at("depth").get<std::string>();
      s.image = render::ReadPpm(image_path);
      s.depth = render::ReadPgm16(depth_path);
      if (s.image.width() != ds.intrinsics.width || s.image.height() != ds.intrinsics.height) {
        throw DataError(image_path.string(), "size does not match intrinsics");
      }
      if (s.depth.width() != s.image.width() || s.depth.height() != s.image.height()) {
        throw DataError(depth_path.string(), "size does not match image");
      }
      for (const auto& mp : files.at("masks")) {
        const fs::path mask_path = dir / mp.get<std::string>();
        s.masks.push_back(render::ReadMaskPgm(mask_path));
        if (s.masks.back().width() != s.image.width() ||
            s.masks.back().height() != s.image.height()) {
          throw DataError(mask_path.string(), "size does not match image");
        }
      }
      std::vector<Pose> poses;
      for (const auto& inst : sj.at("instances")) {
        s.object_ids.push_back(inst.at("object_id").get<std::string>());
        if (inst.contains("pose")) poses.push_back(PoseFromJson(inst.at("pose")));
      }
      if (s.object_ids.size() != s.masks.size()) {
        throw DataError(mf, "scene " + s.scene_id + ": instance and mask counts differ");
      }
      if (sj.value("labeled", false)) {
        if (poses.size() != s.masks.size()) {
          throw DataError(mf, "scene " + s.scene_id + ": missing instance poses");
        }
        s.set_labels(std::move(poses));
      }
      ds.scenes.push_back(std::move(s));
    }
    for (const auto& [name, ids] : m.at("splits").items()) {
      ds.splits[name] = ids.get<std::vector<std::string>>();
      for (const auto& id : ds.splits[name]) ds.scene(id);
    }
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(mf, e.what());
  }
  return ds;
}

GroundTruthStore ReadGroundTruth(const fs::path& dir) {
  const fs::path path = dir / "gt.json";
  const json j = ReadJsonFile(path);
  GroundTruthStore store;
  try {
    for (const auto& [id, list] : j.items()) {
      std::vector<Pose> poses(list.size());
      for (const auto& e : list) {
        const std::size_t k = e.at("instance").get<std::size_t>();
        if (k >= poses.size()) throw DataError(path.string(), "instance index out of range");
        poses[k] = PoseFromJson(e.at("pose"));
      }
      store[id] = std::move(poses);
    }
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path.string(), e.what());
  }
  return store;
}

}  // namespace binpose::simdata
