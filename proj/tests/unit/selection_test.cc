#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "binpose/errors.h"
#include "binpose/geometry/metrics.h"
#include "binpose/render/rasterizer.h"
#include "binpose/selection/mask_overlap.h"
#include "binpose/selection/perceptual.h"
#include "binpose/selection/score_table.h"
#include "binpose/selection/scores.h"
#include "binpose/selection/scoring.h"
#include "binpose/simdata/shapes.h"
#include "test_helpers.h"

using namespace binpose;
using namespace binpose::selection;
using namespace binpose::testing;
using geometry::CameraIntrinsics;
using geometry::ObjectModel;
using render::ColorImage;
using render::Rgb;

namespace {

Mask MaskFrom(int w, int h, std::initializer_list<std::pair<int, int>> fg) {
  Mask m(w, h);
  for (auto [u, v] : fg) m.at(u, v) = 1;
  return m;
}

Mask RandomMask(std::mt19937_64& rng, int w, int h, double p) {
  Mask m(w, h);
  for (auto& b : m.data()) b = Uniform(rng, 0, 1) < p;
  return m;
}

double OverlapOracle(const Mask& r, const Mask& o) {
  double n_pos = 0, hit_pos = 0, n_neg = 0, hit_neg = 0;
  for (int v = 0; v < o.height(); ++v) {
    for (int u = 0; u < o.width(); ++u) {
      if (o.at(u, v)) {
        n_pos += 1;
        if (r.at(u, v)) hit_pos += 1;
      }
      if (!r.at(u, v)) {
        n_neg += 1;
        if (!o.at(u, v)) hit_neg += 1;
      }
    }
  }
  return 0.5 * (hit_pos / n_pos + hit_neg / n_neg);
}

ColorImage RandomImage(std::mt19937_64& rng, int w, int h) {
  ColorImage img(w, h);
  for (auto& c : img.data()) {
    c = {static_cast<float>(Uniform(rng, 0, 1)), static_cast<float>(Uniform(rng, 0, 1)),
         static_cast<float>(Uniform(rng, 0, 1))};
  }
  return img;
}

/// One object rendered noiselessly, as a sensor would see it.
struct SingleView {
  ObjectModel model;
  Pose gt;
  CameraIntrinsics cam;
  render::RenderOutput render;
  geometry::PointCloud cloud;

  Observation observation() const { return {&render.image, &render.mask, &cloud}; }
};

SingleView MakeView() {
  SingleView s;
  s.model = ObjectModel::FromMesh("bracket", simdata::MakeBracketMesh(), false);
  s.gt = Pose(Quat(Eigen::AngleAxisd(0.7, Vec3(1, 2, 0.5).normalized())), Vec3(0.01, -0.005, 0.45));
  s.render = render::Render(s.model, s.gt, s.cam, render::LightSpec());
  for (int v = 0; v < s.cam.height; ++v) {
    for (int u = 0; u < s.cam.width; ++u) {
      const double z = s.render.depth.at(u, v);
      if (z > 0) s.cloud.points.push_back(s.cam.PixelRay(u, v) * z);
    }
  }
  return s;
}

Pose Perturb(const Pose& p, std::mt19937_64& rng, double max_deg, double max_t) {
  const Vec3 axis = RandomVec(rng).normalized();
  const Quat dq(Eigen::AngleAxisd(Uniform(rng, 0, max_deg) * M_PI / 180.0, axis));
  const Vec3 dir = RandomVec(rng).normalized();
  return Pose(dq * p.rotation(), p.translation() + dir * Uniform(rng, 0, max_t));
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("mask overlap examples") {
  const Mask o = MaskFrom(4, 4, {{0, 0}, {0, 1}});
  CHECK(MaskOverlapScore(o, o) == 1.0);
  const Mask r = MaskFrom(4, 4, {{0, 0}});
  CHECK(MaskOverlapScore(r, o) == doctest::Approx(0.5 * (0.5 + 14.0 / 15.0)).epsilon(1e-15));
  CHECK(MaskOverlapScore(r, o) == doctest::Approx(0.71667).epsilon(1e-5));
  CHECK(MaskDistance(r, o) == doctest::Approx(0.28333).epsilon(1e-4));
  CHECK(MaskDistance(o, o) == 0.0);

  Mask complement(4, 4, 1);
  complement.at(0, 0) = 0;
  complement.at(0, 1) = 0;
  // First term vanishes; the second counts rendered background (2 px) that is observed foreground.
  CHECK(MaskOverlapScore(complement, o) == 0.0);
}

TEST_CASE("mask overlap preconditions") {
  const Mask o = MaskFrom(4, 4, {{0, 0}});
  CHECK_THROWS_AS(MaskOverlapScore(Mask(4, 5), o), PreconditionError);
  CHECK_THROWS_AS(MaskOverlapScore(o, Mask(4, 4)), PreconditionError);
  CHECK_THROWS_AS(MaskOverlapScore(Mask(4, 4, 1), o), PreconditionError);
}

TEST_CASE("mask overlap agrees with counting oracle") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 500) {
    const int w = 1 + static_cast<int>(rng() % 16), h = 1 + static_cast<int>(rng() % 16);
    const Mask r = RandomMask(rng, w, h, Uniform(rng, 0, 1));
    const Mask o = RandomMask(rng, w, h, Uniform(rng, 0, 1));
    if (render::CountForeground(o) == 0 || render::CountForeground(r) == r.size()) continue;
    ++checked;
    const double s = MaskOverlapScore(r, o);
    CHECK(s == OverlapOracle(r, o));
    CHECK(MaskDistance(r, o) >= 0.0);
    CHECK(MaskDistance(r, o) <= 1.0);
    if (render::CountForeground(r) > 0) CHECK(MaskOverlapScore(r, r) == 1.0);
  }
}

TEST_CASE("perceptual distance of identical images is zero") {
  std::mt19937_64 rng(32);
  const ColorImage a = RandomImage(rng, 9, 7);
  CHECK(PerceptualDistance(a, a) == 0.0);
  CHECK_THROWS_AS(PerceptualDistance(a, RandomImage(rng, 9, 8)), PreconditionError);
}

TEST_CASE("perceptual distance of one bright pixel") {
  // Constant 0.2 everywhere gives feature (1, 0, 0). A 1.0 pixel in the centre keeps its own
  // feature at (1, 0, 0) but turns its four neighbours into (0.2, -+0.4, 0) / sqrt(0.2), each at
  // distance sqrt(2 - 2 / sqrt(5)) from (1, 0, 0).
  ColorImage base(5, 5, Rgb{0.2f, 0.2f, 0.2f});
  ColorImage bright = base;
  bright.at(2, 2) = {1.f, 1.f, 1.f};
  FeatureExtractorSpec spec;
  spec.levels = 1;
  const double expect = 4.0 * std::sqrt(2.0 - 2.0 / std::sqrt(5.0)) / 25.0;
  CHECK(expect == doctest::Approx(0.168234).epsilon(1e-6));
  CHECK(std::abs(PerceptualDistance(base, bright, spec) - expect) < 1e-6);
}

TEST_CASE("perceptual distance is bounded by twice the level count") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 20; ++i) {
    const double d = PerceptualDistance(RandomImage(rng, 12, 10), RandomImage(rng, 12, 10));
    CHECK(d >= 0.0);
    CHECK(d <= 2.0 * 3);
  }
}

TEST_CASE("perceptual features are unit length") {
  std::mt19937_64 rng(34);
  const auto levels = PyramidFeatureExtractor().Extract(RandomImage(rng, 16, 12));
  REQUIRE(levels.size() == 3);
  CHECK(levels[1].width == 8);
  CHECK(levels[2].height == 3);
  for (const FeatureMap& m : levels) {
    for (int v = 0; v < m.height; ++v) {
      for (int u = 0; u < m.width; ++u) {
        const double* f = m.at(u, v);
        CHECK(std::abs(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) - 1.0) < 1e-9);
      }
    }
  }
  // An all-black pixel stays at zero under the epsilon guard.
  const auto black = PyramidFeatureExtractor().Extract(ColorImage(4, 4));
  CHECK(black[0].at(1, 1)[0] == 0.0);
}

TEST_CASE("perceptual distance is a pseudometric") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const ColorImage a = RandomImage(rng, 8, 8), b = RandomImage(rng, 8, 8), c = RandomImage(rng, 8, 8);
    const double ab = PerceptualDistance(a, b), ba = PerceptualDistance(b, a);
    const double bc = PerceptualDistance(b, c), ac = PerceptualDistance(a, c);
    CHECK(ab == ba);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("extractor spec validation") {
  FeatureExtractorSpec s;
  s.levels = 0;
  CHECK_THROWS_AS(s.Validate(), PreconditionError);
  s = {};
  s.sigma = 0.0;
  CHECK_THROWS_AS(PyramidFeatureExtractor{s}, PreconditionError);
}

TEST_CASE("appearance distance") {
  CHECK(AppearanceDistance(0.0, 7.0) == 0.0);
  CHECK(AppearanceDistance(0.28333, 1.5) == doctest::Approx(0.424995).epsilon(1e-12));
  CHECK(AppearanceDistance(1.5, 0.28333) == AppearanceDistance(0.28333, 1.5));
  const SelectionScores s = MakeScores(0.3, 2.0, 0.01);
  CHECK(std::abs(s.d_a - s.d_mask * s.d_image) < 1e-12);
}

TEST_CASE("adaptive thresholds") {
  std::vector<SelectionScores> pop = {MakeScores(1, 1, 1), MakeScores(1, 2, 2), MakeScores(1, 3, 3)};
  const Thresholds t = AdaptiveThresholds(pop);
  CHECK(t.tau_a == doctest::Approx(2.0 + std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(t.tau_a == doctest::Approx(2.81650).epsilon(1e-5));
  CHECK(t.tau_g == doctest::Approx(2.81650).epsilon(1e-5));
  CHECK(Select(pop[0], t));
  CHECK(Select(pop[1], t));
  CHECK(!Select(pop[2], t));

  std::vector<SelectionScores> flat(4, MakeScores(1, 0.5, 0.2));
  const Thresholds tf = AdaptiveThresholds(flat);
  CHECK(tf.tau_a == 0.5);
  CHECK(tf.tau_g == 0.2);
  for (const auto& s : flat) CHECK(!Select(s, tf));

  CHECK_THROWS_AS(AdaptiveThresholds(std::vector<SelectionScores>{pop[0]}), PreconditionError);
}

TEST_CASE("sentinels are excluded from thresholds and always rejected") {
  std::vector<SelectionScores> pop = {MakeScores(1, 1, 1), MakeScores(1, 2, 2), MakeScores(1, 3, 3),
                                      MakeScores(0, 0, kSentinelDistance)};
  const Thresholds t = AdaptiveThresholds(pop);
  CHECK(t.tau_a == doctest::Approx(2.81650).epsilon(1e-5));
  CHECK(std::isfinite(t.tau_g));
  CHECK(!Select(pop[3], t));
  CHECK(!Select(pop[3], t, SelectionMode::kAppearanceOnly));
  std::vector<SelectionScores> two_sentinels = {MakeScores(1, 1, 1), MakeScores(0, 0, kSentinelDistance)};
  CHECK_THROWS_AS(AdaptiveThresholds(two_sentinels), PreconditionError);
}

TEST_CASE("geometry threshold scales linearly") {
  std::mt19937_64 rng(36);
  std::vector<SelectionScores> pop, scaled;
  for (int i = 0; i < 30; ++i) {
    const double g = Uniform(rng, 0, 0.05);
    pop.push_back(MakeScores(0.1, 1.0, g));
    scaled.push_back(MakeScores(0.1, 1.0, 3.0 * g));
  }
  CHECK(AdaptiveThresholds(scaled).tau_g == doctest::Approx(3.0 * AdaptiveThresholds(pop).tau_g).epsilon(1e-12));
}

TEST_CASE("select predicate and ablation modes") {
  const Thresholds t{0.5, 0.01};
  CHECK(Select(MakeScores(0, 0, 0), t));
  CHECK(!Select(MakeScores(0.1, 1, kSentinelDistance), t));
  const SelectionScores appearance_ok = MakeScores(0.1, 1, 0.02);
  CHECK(!Select(appearance_ok, t));
  CHECK(Select(appearance_ok, t, SelectionMode::kAppearanceOnly));
  CHECK(!Select(appearance_ok, t, SelectionMode::kGeometryOnly));
  CHECK(ParseSelectionMode("both") == SelectionMode::kAppearanceAndGeometry);
  CHECK(ParseSelectionMode(ToString(SelectionMode::kGeometryOnly)) == SelectionMode::kGeometryOnly);
  CHECK_THROWS_AS(ParseSelectionMode("neither"), ConfigError);
}

TEST_CASE("geometry distance") {
  const SingleView view = MakeView();
  CHECK(GeometryDistance(view.gt, view.model, view.cloud, view.cam) < 1e-6);

  geometry::PointCloud shifted;
  for (const Vec3& p : view.cloud) shifted.points.push_back(p + Vec3(0.01, 0, 0));
  const double d = GeometryDistance(view.gt, view.model, shifted, view.cam);
  CHECK(d >= 0.005);
  CHECK(d <= 0.02);
  CHECK(d == doctest::Approx(geometry::ChamferDistance(view.cloud, shifted)).epsilon(1e-12));

  const Pose away(view.gt.rotation(), Vec3(5, 0, 0.45));
  CHECK(IsSentinel(GeometryDistance(away, view.model, view.cloud, view.cam)));
  CHECK_THROWS_AS(GeometryDistance(view.gt, view.model, geometry::PointCloud(), view.cam), PreconditionError);
}

TEST_CASE("score prediction at the true pose") {
  const SingleView view = MakeView();
  const PyramidFeatureExtractor ex;
  const SelectionScores s = ScorePrediction(view.gt, view.model, view.observation(), view.cam, ex);
  CHECK(s.d_mask == 0.0);
  CHECK(s.d_image < 1e-6);
  CHECK(s.d_g < 1e-6);
  const Pose away(view.gt.rotation(), Vec3(5, 0, 0.45));
  const SelectionScores far = ScorePrediction(away, view.model, view.observation(), view.cam, ex);
  CHECK(IsSentinel(far.d_g));
  CHECK(far.d_mask > 0.4);
}

TEST_CASE("selected predictions are more accurate than rejected ones") {
  const SingleView view = MakeView();
  const PyramidFeatureExtractor ex;
  std::mt19937_64 rng(37);
  std::vector<Pose> preds;
  std::vector<SelectionScores> scores;
  for (int i = 0; i < 200; ++i) {
    preds.push_back(Perturb(view.gt, rng, 40.0, 0.03));
    scores.push_back(ScorePrediction(preds.back(), view.model, view.observation(), view.cam, ex));
  }
  const Thresholds t = AdaptiveThresholds(scores);
  double sel = 0, rej = 0;
  int ns = 0, nr = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double add = geometry::AddDistance(preds[i], view.gt, view.model);
    if (Select(scores[i], t)) sel += add, ++ns;
    else rej += add, ++nr;
  }
  REQUIRE(ns > 0);
  REQUIRE(nr > 0);
  CHECK(sel / ns < rej / nr);
}

TEST_CASE("depth offset is caught by geometry but not by the mask") {
  const SingleView view = MakeView();
  const PyramidFeatureExtractor ex;
  std::mt19937_64 rng(38);
  std::vector<double> d_mask, d_g;
  for (int i = 0; i < 100; ++i) {
    const SelectionScores s =
        ScorePrediction(Perturb(view.gt, rng, 20.0, 0.02), view.model, view.observation(), view.cam, ex);
    d_mask.push_back(s.d_mask);
    d_g.push_back(s.d_g);
  }
  const Vec3 ray = view.gt.translation().normalized();
  const Pose probe(view.gt.rotation(), view.gt.translation() + 0.01 * ray);
  const auto ren = render::Render(view.model, probe, view.cam, render::LightSpec());
  double inter = 0, uni = 0;
  for (std::size_t p = 0; p < ren.mask.size(); ++p) {
    inter += ren.mask.data()[p] && view.render.mask.data()[p];
    uni += ren.mask.data()[p] || view.render.mask.data()[p];
  }
  REQUIRE(inter / uni > 0.95);
  const SelectionScores s = ScorePrediction(probe, view.model, view.observation(), view.cam, ex);
  CHECK(s.d_g > Median(d_g));
  CHECK(s.d_mask < Median(d_mask));
}

TEST_CASE("score table round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "binpose_unit_scores";
  std::filesystem::create_directories(dir);
  std::vector<ScoreRecord> rows = {
      {"unl_0000", 0, MakeScores(0.125, 1.0 / 3.0, 0.004), true},
      {"unl_0001", 3, MakeScores(1.0, 1.0, kSentinelDistance), false},
  };
  WriteScoresCsv(rows, dir / "s.csv");
  const auto back = ReadScoresCsv(dir / "s.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].scene_id == "unl_0000");
  CHECK(back[0].scores == rows[0].scores);
  CHECK(back[0].selected);
  CHECK(back[1].instance_id == 3);
  CHECK(IsSentinel(back[1].scores.d_g));
  CHECK(!back[1].selected);
}

}  // TEST_SUITE
