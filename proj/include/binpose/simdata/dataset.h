#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "binpose/geometry/object_model.h"
#include "binpose/simdata/scene.h"
#include "binpose/simdata/scene_generator.h"

namespace binpose::simdata {

inline constexpr const char* kSyntheticSplit = "synthetic";
inline constexpr const char* kUnlabeledSplit = "real_unlabeled";
inline constexpr const char* kEvalSplit = "real_eval";
inline constexpr int kManifestVersion = 1;

struct Dataset {
  std::vector<geometry::ObjectModel> objects;
  CameraIntrinsics intrinsics;
  std::vector<Scene> scenes;
  /// Split name -> scene ids, in order.
  std::map<std::string, std::vector<std::string>> splits;
  /// Withheld labels of the real splits. Empty after ReadDataset; fill it with
  /// ReadGroundTruth for evaluation.
  GroundTruthStore withheld;

  const geometry::ObjectModel& object(const std::string& id) const;
  const Scene& scene(const std::string& id) const;
  std::vector<const Scene*> Split(const std::string& name) const;
};

struct DatasetSpec {
  int synthetic_scenes = 200;
  int unlabeled_scenes = 150;
  int eval_scenes = 50;
  CameraIntrinsics intrinsics;
  BinSpec bin;
  SceneOptions scene = DefaultSceneOptions();
  ShiftSpec shift = DefaultShift();
  std::uint64_t seed = 1;

  static ShiftSpec DefaultShift();
  static SceneOptions DefaultSceneOptions();
  static DatasetSpec FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

/// Synthetic scenes keep their labels; real-like scenes are rendered with a
/// jittered light, passed through DomainShift and have their labels moved
/// into `Dataset::withheld`. Scene i of every split owns seed
/// DeriveSeed(spec.seed, i + offset) so splits never share a seed.
Dataset GenerateDataset(const DatasetSpec& spec, std::vector<geometry::ObjectModel> objects);

/// Writes manifest.json, gt.json, objects/*.obj and scenes/<id>/ files.
/// The manifest is written last.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Loads everything except withheld labels. Throws DataError naming the
/// offending file.
Dataset ReadDataset(const std::filesystem::path& dir);

GroundTruthStore ReadGroundTruth(const std::filesystem::path& dir);

nlohmann::json PoseToJson(const Pose& pose);
Pose PoseFromJson(const nlohmann::json& j);
nlohmann::json IntrinsicsToJson(const CameraIntrinsics& cam);
CameraIntrinsics IntrinsicsFromJson(const nlohmann::json& j);

}  // namespace binpose::simdata
