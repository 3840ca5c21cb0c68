#include <doctest.h>

#include <cmath>
#include <random>

#include "binpose/errors.h"
#include "binpose/estimator/estimator.h"
#include "binpose/estimator/state_io.h"
#include "binpose/geometry/metrics.h"
#include "binpose/geometry/visible_surface.h"
#include "binpose/render/rasterizer.h"
#include "binpose/simdata/shapes.h"
#include "test_helpers.h"

using namespace binpose;
using namespace binpose::estimator;
using namespace binpose::testing;
using geometry::CameraIntrinsics;
using geometry::ObjectModel;
using geometry::PointCloud;
using geometry::RotationAngle;

namespace {

Crop CropFromRender(const render::RenderOutput& r, const CameraIntrinsics& cam, int padding) {
  render::PixelBox b = render::MaskBounds(r.mask);
  b = {std::max(0, b.u0 - padding), std::max(0, b.v0 - padding),
       std::min(cam.width - 1, b.u1 + padding), std::min(cam.height - 1, b.v1 + padding)};
  Crop c;
  c.window = b;
  c.mask = render::CropBuffer(r.mask, b);
  c.depth = render::CropBuffer(r.depth, b);
  c.image = render::CropBuffer(r.image, b);
  for (int v = b.v0; v <= b.v1; ++v) {
    for (int u = b.u0; u <= b.u1; ++u) {
      if (r.mask.at(u, v)) c.cloud.points.push_back(cam.PixelRay(u, v) * r.depth.at(u, v));
    }
  }
  return c;
}

const ObjectModel& Bracket() {
  static const ObjectModel m = ObjectModel::FromMesh("bracket", simdata::MakeBracketMesh(), false);
  return m;
}

Pose RandomViewPose(std::mt19937_64& rng) {
  return Pose(RandomQuat(rng), Vec3(Uniform(rng, -0.05, 0.05), Uniform(rng, -0.04, 0.04),
                                    Uniform(rng, 0.4, 0.5)));
}

struct Rendered {
  Pose pose;
  Crop crop;
};

std::vector<Rendered> RenderSet(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CameraIntrinsics cam;
  std::vector<Rendered> out;
  while (static_cast<int>(out.size()) < n) {
    const Pose p = RandomViewPose(rng);
    const auto r = render::Render(Bracket(), p, cam, render::LightSpec());
    if (render::CountForeground(r.mask) < 30) continue;
    out.push_back({p, CropFromRender(r, cam, 2)});
  }
  return out;
}

EstimatorState TrainOn(const std::vector<Rendered>& set, const EstimatorConfig& cfg = {}) {
  std::vector<LabeledCrop> labels;
  for (std::size_t i = 0; i < set.size(); ++i) {
    labels.push_back({&set[i].crop, set[i].pose, "bracket", "r/" + std::to_string(i)});
  }
  const ModelTable models = {{"bracket", &Bracket()}};
  return Train(EstimatorState::Initial(cfg), labels, models, losses::LossConfig(), CameraIntrinsics());
}

PointCloud Rays(const PointCloud& pts, const Vec3& center, losses::CenterVectorField& v) {
  v = losses::CenterVectors(center, pts);
  return pts;
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("ransac vote examples") {
  const PointCloud pts({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)});
  const Vec3 c = RansacCenterVote(pts, losses::CenterVectors(Vec3(1, 1, 0), pts));
  CHECK((c - Vec3(1, 1, 0)).norm() < 1e-6);

  const PointCloud around({Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(-1, -1, 0)});
  CHECK(RansacCenterVote(around, losses::CenterVectors(Vec3::Zero(), around)).norm() < 1e-9);
}

TEST_CASE("ransac exact recovery without noise") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    const Vec3 center = RandomVec(rng, 0.5);
    losses::CenterVectorField v;
    const PointCloud pts = Rays(RandomCloud(rng, 3 + static_cast<int>(rng() % 30)), center, v);
    CHECK((RansacCenterVote(pts, v) - center).norm() < 1e-6);
    CHECK((LeastSquaresRayIntersection(pts, v) - center).norm() < 1e-6);
  }
}

TEST_CASE("ransac tolerates outlier rays") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 center = RandomVec(rng, 0.2);
    const PointCloud pts = RandomCloud(rng, 50, 0.1);
    losses::CenterVectorField v = losses::CenterVectors(center, pts);
    for (std::size_t i = 0; i < v.size(); i += 5) v.vectors[i] = RandomVec(rng).normalized();
    RansacOptions opt;
    opt.seed = trial;
    CHECK((RansacCenterVote(pts, v, opt) - center).norm() < opt.inlier_tolerance);
  }
}

TEST_CASE("ransac preconditions") {
  const PointCloud one({Vec3(0, 0, 0)});
  CHECK_THROWS_AS(RansacCenterVote(one, losses::CenterVectors(Vec3(1, 0, 0), one)), PreconditionError);
  const PointCloud pts({Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(0, 2, 0)});
  losses::CenterVectorField parallel{{Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)}};
  CHECK_THROWS_AS(RansacCenterVote(pts, parallel), DegenerateGeometryError);
}

TEST_CASE("rigid alignment recovers a known transform") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    const Pose t = RandomPose(rng);
    std::vector<Vec3> src, dst;
    for (int k = 0; k < 10; ++k) {
      src.push_back(RandomVec(rng));
      dst.push_back(t * src.back());
    }
    const Pose s = SolveRigidAlignment(src, dst);
    CHECK(RotationAngle(s.rotation(), t.rotation()) < 1e-7);
    CHECK((s.translation() - t.translation()).norm() < 1e-9);
  }
}

TEST_CASE("icp at the true pose is a fixed point") {
  const CameraIntrinsics cam;
  const Pose gt(Quat(0.8, 0.3, -0.4, 0.2), Vec3(0.01, 0.0, 0.45));
  const PointCloud obs = geometry::VisibleSurfacePoints(Bracket(), gt, cam);
  const Prediction p = IcpRefine(gt, Bracket(), obs, cam);
  CHECK(RotationAngle(p.pose.rotation(), gt.rotation()) < 1e-9);
  CHECK((p.pose.translation() - gt.translation()).norm() < 1e-9);
  CHECK(p.fit_residual < 1e-9);
}

TEST_CASE("icp recovers a small perturbation") {
  const CameraIntrinsics cam;
  std::mt19937_64 rng(54);
  for (int i = 0; i < 10; ++i) {
    const Pose gt = RandomViewPose(rng);
    PointCloud obs;
    try {
      obs = geometry::VisibleSurfacePoints(Bracket(), gt, cam);
    } catch (const EmptyProjectionError&) {
      continue;
    }
    const Quat dq(Eigen::AngleAxisd(5.0 * M_PI / 180.0, RandomVec(rng).normalized()));
    const Pose init(dq * gt.rotation(), gt.translation() + 0.005 * RandomVec(rng).normalized());
    IcpOptions opt;
    opt.max_iterations = 100;
    opt.max_observed_points = 100000;
    const Prediction p = IcpRefine(init, Bracket(), obs, cam, opt);
    CHECK(geometry::AddDistance(p.pose, gt, Bracket()) < 1e-4);
  }
}

TEST_CASE("icp residual never increases") {
  const CameraIntrinsics cam;
  std::mt19937_64 rng(55);
  int runs = 0;
  while (runs < 100) {
    const Pose gt = RandomViewPose(rng);
    const Pose init(RandomQuat(rng), gt.translation() + 0.01 * RandomVec(rng));
    PointCloud obs;
    try {
      obs = geometry::VisibleSurfacePoints(Bracket(), gt, cam);
      std::vector<double> trace;
      IcpRefine(init, Bracket(), obs, cam, {}, &trace);
      for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-15);
      ++runs;
    } catch (const Error&) {
    }
  }
}

TEST_CASE("icp needs three points") {
  const PointCloud two({Vec3(0, 0, 0.5), Vec3(0.01, 0, 0.5)});
  CHECK_THROWS_AS(IcpRefine(Pose(Quat::Identity(), Vec3(0, 0, 0.5)), Bracket(), two, CameraIntrinsics()),
                  RefinementError);
}

TEST_CASE("descriptor basics") {
  const auto set = RenderSet(2, 56);
  const auto d = ComputeDescriptor(set[0].crop);
  CHECK(d.size() == 82);
  CHECK(kDescriptorLength == 82);
  CHECK(ComputeDescriptor(set[0].crop) == d);
  CHECK(ComputeDescriptor(set[1].crop) != d);
  double hist = 0.0;
  for (int i = 64; i < 80; ++i) hist += d[i];
  CHECK(hist == doctest::Approx(1.0));
  Crop empty = set[0].crop;
  std::fill(empty.mask.data().begin(), empty.mask.data().end(), 0);
  CHECK_THROWS_AS(ComputeDescriptor(empty), PreconditionError);
}

TEST_CASE("descriptor ignores where the crop sits") {
  const CameraIntrinsics cam;
  const Pose p(Quat(0.9, 0.1, 0.3, -0.2), Vec3(0.0, 0.0, 0.45));
  const auto r = render::Render(Bracket(), p, cam, render::LightSpec());
  const auto d = ComputeDescriptor(CropFromRender(r, cam, 0));
  CHECK(ComputeDescriptor(CropFromRender(r, cam, 3)) == d);
  CHECK(ComputeDescriptor(CropFromRender(r, cam, 9)) == d);

  // Whole-pixel image translation of the same render.
  render::RenderOutput shifted = r;
  const int du = 7, dv = -5;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const int su = u - du, sv = v - dv;
      const bool in = r.mask.contains(su, sv);
      shifted.mask.at(u, v) = in ? r.mask.at(su, sv) : 0;
      shifted.depth.at(u, v) = in ? r.depth.at(su, sv) : 0.0;
      shifted.image.at(u, v) = in ? r.image.at(su, sv) : render::Rgb{0, 0, 0};
    }
  }
  CHECK(ComputeDescriptor(CropFromRender(shifted, cam, 2)) == d);
}

TEST_CASE("predict with an empty bank uses anchors") {
  const auto set = RenderSet(1, 57);
  const EstimatorState s = EstimatorState::Initial({});
  const Prediction p = Predict(s, set[0].crop, Bracket(), CameraIntrinsics());
  CHECK(std::isfinite(p.fit_residual));
  CHECK(p.fit_residual >= 0.0);
  Crop no_cloud = set[0].crop;
  no_cloud.cloud.points.clear();
  CHECK_THROWS_AS(Predict(s, no_cloud, Bracket(), CameraIntrinsics()), PreconditionError);
}

TEST_CASE("predict is deterministic") {
  const auto set = RenderSet(20, 58);
  const EstimatorState s = TrainOn(set);
  const auto probe = RenderSet(3, 59);
  for (const auto& r : probe) {
    const Prediction a = Predict(s, r.crop, Bracket(), CameraIntrinsics());
    const Prediction b = Predict(s, r.crop, Bracket(), CameraIntrinsics());
    CHECK(a.pose.rotation().coeffs() == b.pose.rotation().coeffs());
    CHECK(a.pose.translation() == b.pose.translation());
    CHECK(a.fit_residual == b.fit_residual);
  }
}

TEST_CASE("predict on trained renders is accurate") {
  const auto set = RenderSet(30, 60);
  const EstimatorState s = TrainOn(set);
  for (std::size_t i = 0; i < set.size(); i += 3) {
    const Prediction p = Predict(s, set[i].crop, Bracket(), CameraIntrinsics());
    CHECK(geometry::AddDistance(p.pose, set[i].pose, Bracket()) < 0.05 * Bracket().diameter);
  }
}

TEST_CASE("training lowers error on the training crops") {
  const auto set = RenderSet(50, 61);
  const EstimatorState untrained = EstimatorState::Initial({});
  const EstimatorState trained = TrainOn(set);
  double before = 0.0, after = 0.0;
  for (const auto& r : set) {
    before += geometry::AddDistance(Predict(untrained, r.crop, Bracket(), CameraIntrinsics()).pose, r.pose, Bracket());
    after += geometry::AddDistance(Predict(trained, r.crop, Bracket(), CameraIntrinsics()).pose, r.pose, Bracket());
  }
  CHECK(after < before);
}

TEST_CASE("predict follows a translation along the viewing ray") {
  const auto set = RenderSet(20, 62);
  const EstimatorState s = TrainOn(set);
  for (int i = 0; i < 5; ++i) {
    const Crop& crop = set[i].crop;
    const Vec3 delta = 0.003 * geometry::Centroid(crop.cloud).normalized();
    Crop moved = crop;
    for (Vec3& p : moved.cloud.points) p += delta;
    const Prediction a = Predict(s, crop, Bracket(), CameraIntrinsics());
    const Prediction b = Predict(s, moved, Bracket(), CameraIntrinsics());
    CHECK((b.pose.translation() - a.pose.translation() - delta).norm() < 1e-3);
    CHECK(RotationAngle(a.pose.rotation(), b.pose.rotation()) < 1e-3);
  }
}

TEST_CASE("train on nothing changes nothing") {
  const auto set = RenderSet(5, 63);
  const EstimatorState s = TrainOn(set);
  const EstimatorState same = Train(s, {}, {{"bracket", &Bracket()}}, losses::LossConfig(), CameraIntrinsics());
  CHECK(SerializeState(same) == SerializeState(s));
}

TEST_CASE("train is deterministic") {
  const auto set = RenderSet(10, 64);
  CHECK(SerializeState(TrainOn(set)) == SerializeState(TrainOn(set)));
}

TEST_CASE("train fills the bank, replaces by source and respects capacity") {
  const auto set = RenderSet(12, 65);
  EstimatorConfig cfg;
  cfg.capacity = 5;
  const EstimatorState s = TrainOn(set, cfg);
  CHECK(s.exemplars.size() == 5);
  CHECK(s.seen == 12);
  CHECK(s.anchor_bias.size() == 60);

  const EstimatorState full = TrainOn(set);
  CHECK(full.exemplars.size() == 12);
  // The same sources again overwrite in place.
  std::vector<LabeledCrop> again;
  for (std::size_t i = 0; i < set.size(); ++i) again.push_back({&set[i].crop, set[i].pose, "bracket", "r/" + std::to_string(i)});
  const EstimatorState twice = Train(full, again, {{"bracket", &Bracket()}}, losses::LossConfig(), CameraIntrinsics());
  CHECK(twice.exemplars.size() == 12);
  CHECK(twice.exemplars == full.exemplars);

  // Anchors that explain the labels gain weight.
  const auto top = TopAnchors(full, 1);
  double best = 1e9;
  for (const auto& r : set) best = std::min(best, RotationAngle(geometry::IcosahedralRotationAnchors()[top[0]].rotation(), r.pose.rotation()));
  CHECK(best < 0.8);
  CHECK_THROWS_AS(Train(EstimatorState::Initial({}), again, {}, losses::LossConfig(), CameraIntrinsics()), PreconditionError);
}

TEST_CASE("top anchors order and ties") {
  EstimatorState s = EstimatorState::Initial({});
  CHECK(TopAnchors(s, 3) == std::vector<int>{0, 1, 2});
  s.anchor_bias[7] = 1.0;
  s.anchor_bias[3] = 1.0;
  s.anchor_bias[50] = 2.0;
  CHECK(TopAnchors(s, 3) == std::vector<int>{50, 3, 7});
  CHECK(TopAnchors(s, 0).empty());
}

TEST_CASE("estimator config") {
  EstimatorConfig c = EstimatorConfig::FromJson({{"top_k_anchors", 4}, {"seed", 9}});
  CHECK(c.top_k_anchors == 4);
  CHECK(c.ransac.seed == 9);
  CHECK(EstimatorConfig::FromJson(c.ToJson()).ToJson() == c.ToJson());
  CHECK_THROWS_AS(EstimatorConfig::FromJson({{"top_k_anchors", 61}}), ConfigError);
  CHECK_THROWS_AS(EstimatorConfig::FromJson({{"top_k_anchors", 0}, {"exemplar_neighbors", 0}}), ConfigError);
  CHECK_THROWS_AS(EstimatorConfig::FromJson({{"capacity", "many"}}), ConfigError);
}

TEST_CASE("state serialization round trip and rejection") {
  const auto set = RenderSet(6, 66);
  const EstimatorState s = TrainOn(set);
  const std::string bytes = SerializeState(s);
  CHECK(bytes.compare(0, 8, "BPESTATE") == 0);
  const EstimatorState back = DeserializeState(bytes);
  CHECK(back.exemplars == s.exemplars);
  CHECK(back.anchor_bias == s.anchor_bias);
  CHECK(back.seen == s.seen);
  CHECK(back.training_loss == s.training_loss);
  CHECK(SerializeState(back) == bytes);

  std::string wrong_version = bytes;
  wrong_version[8] = 2;
  CHECK_THROWS_AS(DeserializeState(wrong_version), DataError);
  CHECK_THROWS_AS(DeserializeState(bytes.substr(0, bytes.size() - 3)), DataError);
  CHECK_THROWS_AS(DeserializeState("NOTSTATE" + bytes.substr(8)), DataError);
  CHECK_THROWS_AS(DeserializeState(bytes + "x"), DataError);

  const auto path = std::filesystem::temp_directory_path() / "binpose_unit_state.bin";
  SaveState(s, path);
  CHECK(SerializeState(LoadState(path)) == bytes);
  CHECK_THROWS_AS(LoadState(path.string() + ".missing"), DataError);
}

}  // TEST_SUITE
