// Acceptance checks, one criterion per invocation:
//   binpose_acceptance <2..8> [--out DIR]
// Prints one "criterion N: PASS|FAIL ..." line and exits non-zero on FAIL.
// Criteria 5-7 write their report JSONs under DIR; criterion 8 reruns them
// into DIR/rerun and compares bytes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binpose/geometry/anchors.h"
#include "binpose/geometry/metrics.h"
#include "binpose/losses/losses.h"
#include "binpose/pipeline/pipeline.h"
#include "binpose/pipeline/reports.h"
#include "binpose/render/rasterizer.h"
#include "binpose/selection/mask_overlap.h"
#include "binpose/selection/perceptual.h"
#include "binpose/selection/scores.h"
#include "binpose/selection/scoring.h"
#include "binpose/simdata/dataset.h"
#include "binpose/simdata/shapes.h"

namespace fs = std::filesystem;
using namespace binpose;
using geometry::ObjectModel;
using geometry::PointCloud;
using geometry::Pose;
using geometry::Quat;
using geometry::Vec3;

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Quat RandomQuat(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Quat(g(rng), g(rng), g(rng), g(rng)).normalized();
}

Vec3 RandomVec(std::mt19937_64& rng, double s) {
  return Vec3(Uniform(rng, -s, s), Uniform(rng, -s, s), Uniform(rng, -s, s));
}

PointCloud RandomCloud(std::mt19937_64& rng, int n, double s) {
  PointCloud c;
  for (int i = 0; i < n; ++i) c.points.push_back(RandomVec(rng, s));
  return c;
}

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// Brute-force oracles.

double OverlapOracle(const render::Mask& r, const render::Mask& o) {
  long pos = 0, pos_hit = 0, neg = 0, neg_hit = 0;
  for (int v = 0; v < o.height(); ++v) {
    for (int u = 0; u < o.width(); ++u) {
      const bool ro = r.at(u, v) != 0, oo = o.at(u, v) != 0;
      pos += oo;
      pos_hit += oo && ro;
      neg += !ro;
      neg_hit += !ro && !oo;
    }
  }
  return 0.5 * (double(pos_hit) / double(pos) + double(neg_hit) / double(neg));
}

using Plane = std::vector<std::vector<double>>;  // [v][u]

double Clamped(const Plane& p, int u, int v) {
  const int h = static_cast<int>(p.size()), w = static_cast<int>(p[0].size());
  return p[std::clamp(v, 0, h - 1)][std::clamp(u, 0, w - 1)];
}

// Direct 2-D Gaussian convolution with replicated borders.
Plane Blur2D(const Plane& p, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  double norm = 0.0;
  for (int k = -r; k <= r; ++k) norm += std::exp(-0.5 * k * k / (sigma * sigma));
  Plane out = p;
  for (std::size_t v = 0; v < p.size(); ++v) {
    for (std::size_t u = 0; u < p[0].size(); ++u) {
      double s = 0.0;
      for (int dv = -r; dv <= r; ++dv) {
        for (int du = -r; du <= r; ++du) {
          const double wgt = std::exp(-0.5 * (du * du + dv * dv) / (sigma * sigma)) / (norm * norm);
          s += wgt * Clamped(p, int(u) + du, int(v) + dv);
        }
      }
      out[v][u] = s;
    }
  }
  return out;
}

double PerceptualOracle(const render::ColorImage& a, const render::ColorImage& b,
                        const selection::FeatureExtractorSpec& spec) {
  auto lum = [](const render::ColorImage& img) {
    Plane p(img.height(), std::vector<double>(img.width()));
    for (int v = 0; v < img.height(); ++v) {
      for (int u = 0; u < img.width(); ++u) {
        const auto& c = img.at(u, v);
        p[v][u] = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
      }
    }
    return p;
  };
  auto feature = [&](const Plane& p, int u, int v) {
    const double l = p[v][u];
    const double gx = 0.5 * (Clamped(p, u + 1, v) - Clamped(p, u - 1, v));
    const double gy = 0.5 * (Clamped(p, u, v + 1) - Clamped(p, u, v - 1));
    const double n = std::max(std::sqrt(l * l + gx * gx + gy * gy), spec.epsilon);
    return Vec3(l / n, gx / n, gy / n);
  };
  Plane pa = lum(a), pb = lum(b);
  double total = 0.0;
  for (int level = 0; level < spec.levels; ++level) {
    if (level > 0) {
      auto down = [&](const Plane& p) {
        const Plane bl = Blur2D(p, spec.sigma);
        Plane out((p.size() + 1) / 2, std::vector<double>((p[0].size() + 1) / 2));
        for (std::size_t v = 0; v < out.size(); ++v) {
          for (std::size_t u = 0; u < out[0].size(); ++u) out[v][u] = bl[2 * v][2 * u];
        }
        return out;
      };
      pa = down(pa);
      pb = down(pb);
    }
    double sum = 0.0;
    const int h = static_cast<int>(pa.size()), w = static_cast<int>(pa[0].size());
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) sum += (feature(pa, u, v) - feature(pb, u, v)).norm();
    }
    total += sum / (w * h);
  }
  return total;
}

double NearestBrute(const Vec3& p, const PointCloud& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& q : set.points) best = std::min(best, (p - q).norm());
  return best;
}

double ChamferOracle(const PointCloud& a, const PointCloud& b) {
  double sa = 0.0, sb = 0.0;
  for (const Vec3& p : a.points) sa += NearestBrute(p, b);
  for (const Vec3& p : b.points) sb += NearestBrute(p, a);
  return sa / a.size() + sb / b.size();
}

PointCloud Transform(const Pose& p, const PointCloud& c) {
  PointCloud out;
  for (const Vec3& x : c.points) out.points.push_back(p.rotation() * x + p.translation());
  return out;
}

double AddOracle(const Pose& pred, const Pose& gt, const PointCloud& pts) {
  double s = 0.0;
  for (const Vec3& x : pts.points) {
    s += ((pred.rotation() * x + pred.translation()) - (gt.rotation() * x + gt.translation())).norm();
  }
  return s / pts.size();
}

// Mean over predicted points of the distance to the closest true point.
double AddSOracle(const Pose& pred, const Pose& gt, const PointCloud& pts) {
  const PointCloud truth = Transform(gt, pts);
  double s = 0.0;
  for (const Vec3& x : pts.points) s += NearestBrute(pred.rotation() * x + pred.translation(), truth);
  return s / pts.size();
}

ObjectModel PointModel(const PointCloud& pts, bool symmetric) {
  ObjectModel m;
  m.id = "points";
  m.model_points = pts;
  m.diameter = 1.0;
  m.symmetric = symmetric;
  return m;
}

// ---------------------------------------------------------------------------

Outcome Criterion2() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2002);
  const int n = 200;
  int overlap_exact = 0;
  double perc = 0.0, chamfer = 0.0, add = 0.0, adds = 0.0;
  const selection::FeatureExtractorSpec spec;
  for (int i = 0; i < n; ++i) {
    const int w = 2 + static_cast<int>(rng() % 15), h = 2 + static_cast<int>(rng() % 15);
    render::Mask r(w, h), m(w, h);
    const double pr = Uniform(rng, 0.1, 0.9), pm = Uniform(rng, 0.1, 0.9);
    for (auto& x : r.data()) x = Uniform(rng, 0, 1) < pr;
    for (auto& x : m.data()) x = Uniform(rng, 0, 1) < pm;
    r.data()[0] = 0;  // keep a rendered background pixel
    m.data()[1] = 1;  // and an observed foreground pixel
    overlap_exact += selection::MaskOverlapScore(r, m) == OverlapOracle(r, m);

    render::ColorImage a(w, h), b(w, h);
    for (auto* img : {&a, &b}) {
      for (auto& c : img->data()) {
        c = {float(Uniform(rng, 0, 1)), float(Uniform(rng, 0, 1)), float(Uniform(rng, 0, 1))};
      }
    }
    perc = std::max(perc, RelErr(selection::PerceptualDistance(a, b, spec), PerceptualOracle(a, b, spec)));

    const PointCloud ca = RandomCloud(rng, 1 + static_cast<int>(rng() % 64), 0.1);
    const PointCloud cb = RandomCloud(rng, 1 + static_cast<int>(rng() % 64), 0.1);
    chamfer = std::max(chamfer, RelErr(geometry::ChamferDistance(ca, cb), ChamferOracle(ca, cb)));

    const Pose pred(RandomQuat(rng), RandomVec(rng, 0.05)), gt(RandomQuat(rng), RandomVec(rng, 0.05));
    add = std::max(add, RelErr(geometry::AddDistance(pred, gt, PointModel(ca, false)),
                               AddOracle(pred, gt, ca)));
    adds = std::max(adds, RelErr(geometry::AddSDistance(pred, gt, PointModel(ca, true)),
                                 AddSOracle(pred, gt, ca)));
  }
  const double secs = Since(start);
  o.detail << "mask overlap exact " << overlap_exact << "/" << n << ", max rel err: perceptual "
           << perc << ", chamfer " << chamfer << ", ADD " << add << ", ADD-S " << adds << ", "
           << secs << " s";
  o.Require(overlap_exact == n, "mask overlap exact");
  o.Require(perc <= 1e-9, "perceptual <= 1e-9");
  o.Require(chamfer <= 1e-9, "chamfer <= 1e-9");
  o.Require(add <= 1e-9, "ADD <= 1e-9");
  o.Require(adds <= 1e-9, "ADD-S <= 1e-9");
  o.Require(secs < 30.0, "runtime < 30 s");
  return o;
}

Outcome Criterion3() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const PointCloud pts = RandomCloud(rng, 1 + static_cast<int>(rng() % 40), 0.1);
    const Quat pseudo = RandomQuat(rng), pred = RandomQuat(rng);
    const Vec3 analytic = losses::ShapeMatchAsymmetricGradient(pseudo, pred, pts);
    // Central differences in the left rotation-vector chart; the translation
    // half of the 6-vector is identically zero for a rotation-only loss.
    Vec3 numeric;
    for (int k = 0; k < 3; ++k) {
      Vec3 e = Vec3::Zero();
      e[k] = h;
      const Quat plus = Quat(Eigen::AngleAxisd(h, e / h)) * pred;
      const Quat minus = Quat(Eigen::AngleAxisd(-h, e / h)) * pred;
      numeric[k] = (losses::ShapeMatchAsymmetric(pseudo, plus, pts) -
                    losses::ShapeMatchAsymmetric(pseudo, minus, pts)) / (2 * h);
    }
    worst = std::max(worst, (analytic - numeric).norm() / std::max(numeric.norm(), 1e-12));
  }

  double sigma_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double l = Uniform(rng, 0.001, 0.5), d = Uniform(rng, 0.02, 0.3);
    double best = std::numeric_limits<double>::infinity(), best_sigma = 0.0;
    for (double s = 1e-4; s < 1e3; s *= 1.0005) {
      const losses::AnchorTerm term{l, s};
      const double v = losses::ProbabilisticRotationLoss(std::span(&term, 1), d);
      if (v < best) best = v, best_sigma = s;
    }
    sigma_err = std::max(sigma_err, RelErr(best_sigma, l / d));
  }
  const double secs = Since(start);
  o.detail << "max gradient rel err " << worst << " (100 instances), max grid sigma* rel err "
           << sigma_err << " (20 instances, grid ratio 1.0005), " << secs << " s";
  o.Require(worst < 1e-4, "gradient rel err < 1e-4");
  o.Require(sigma_err < 1e-3, "grid minimiser at L/d");
  o.Require(secs < 10.0, "runtime < 10 s");
  return o;
}

Outcome Criterion4() {
  Outcome o;
  const auto& anchors = geometry::IcosahedralRotationAnchors();
  double closure = 0.0, min_angle = 1e9;
  for (const Pose& a : anchors) {
    for (const Pose& b : anchors) {
      const Quat c = a.rotation() * b.rotation();
      double best = 1e9;
      for (const Pose& e : anchors) best = std::min(best, geometry::RotationAngle(c, e.rotation()));
      closure = std::max(closure, best);
      if (&a != &b) min_angle = std::min(min_angle, geometry::RotationAngle(a.rotation(), b.rotation()));
    }
  }
  const double deg = min_angle * 180.0 / M_PI;
  o.detail << anchors.size() << " rotations, closure error " << closure << " rad, min angle "
           << deg << " deg";
  o.Require(anchors.size() == 60, "60 rotations");
  o.Require(closure < 1e-6, "closure within 1e-6");
  o.Require(std::abs(deg - 72.0) <= 0.1, "min angle 72 +- 0.1");
  return o;
}

// Selection benchmark: 200 perturbed predictions of one rendered bracket plus
// the depth-offset probe, scored against the same observation.
nlohmann::json SelectionBenchmark() {
  const geometry::CameraIntrinsics cam;
  const ObjectModel model = ObjectModel::FromMesh("bracket", simdata::MakeBracketMesh(), false);
  const Pose gt(Quat(Eigen::AngleAxisd(0.7, Vec3(1, 2, 0.5).normalized())), Vec3(0.01, -0.005, 0.45));
  const render::RenderOutput view = render::Render(model, gt, cam, render::LightSpec());
  PointCloud cloud;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      if (view.depth.at(u, v) > 0) cloud.points.push_back(cam.PixelRay(u, v) * view.depth.at(u, v));
    }
  }
  const selection::Observation obs{&view.image, &view.mask, &cloud};
  const selection::PyramidFeatureExtractor ex;

  std::mt19937_64 rng(5005);
  std::vector<Pose> preds;
  std::vector<selection::SelectionScores> scores;
  // Estimator-like noise: mostly near-correct, one in five grossly wrong.
  for (int i = 0; i < 200; ++i) {
    const bool gross = i % 5 == 4;
    const double max_deg = gross ? 40.0 : 5.0, max_t = gross ? 0.03 : 0.005;
    const Quat dq(Eigen::AngleAxisd(Uniform(rng, 0, max_deg) * M_PI / 180.0, RandomVec(rng, 1).normalized()));
    preds.emplace_back(dq * gt.rotation(), gt.translation() + RandomVec(rng, 1).normalized() * Uniform(rng, 0, max_t));
    scores.push_back(selection::ScorePrediction(preds.back(), model, obs, cam, ex));
  }
  const selection::Thresholds tau = selection::AdaptiveThresholds(scores);
  double sel = 0, rej = 0;
  int ns = 0, nr = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double add = geometry::AddDistance(preds[i], gt, model);
    if (selection::Select(scores[i], tau)) sel += add, ++ns;
    else rej += add, ++nr;
  }

  const Pose probe(gt.rotation(), gt.translation() + 0.01 * gt.translation().normalized());
  const render::RenderOutput pr = render::Render(model, probe, cam, render::LightSpec());
  double inter = 0, uni = 0;
  for (std::size_t p = 0; p < pr.mask.size(); ++p) {
    inter += pr.mask.data()[p] && view.mask.data()[p];
    uni += pr.mask.data()[p] || view.mask.data()[p];
  }
  const selection::SelectionScores ps = selection::ScorePrediction(probe, model, obs, cam, ex);
  return {{"predictions", preds.size()},
          {"selected", ns},
          {"rejected", nr},
          {"tau_a", tau.tau_a},
          {"tau_g", tau.tau_g},
          {"selected_mean_add", ns ? sel / ns : 0.0},
          {"rejected_mean_add", nr ? rej / nr : 0.0},
          {"probe_iou", inter / uni},
          {"probe_d_a", ps.d_a},
          {"probe_d_g", ps.d_g},
          {"probe_rejected_by_geometry", !(ps.d_g < tau.tau_g)}};
}

Outcome Criterion5(const fs::path& out) {
  Outcome o;
  const auto start = Clock::now();
  const nlohmann::json r = SelectionBenchmark();
  const double secs = Since(start);
  fs::create_directories(out);
  pipeline::WriteJsonFile(r, out / "selection.json");
  o.detail << "selected " << r["selected"] << "/200, mean ADD selected "
           << r["selected_mean_add"].get<double>() << " vs rejected "
           << r["rejected_mean_add"].get<double>() << "; probe IoU "
           << r["probe_iou"].get<double>() << ", d_g " << r["probe_d_g"].get<double>()
           << " vs tau_g " << r["tau_g"].get<double>() << ", " << secs << " s";
  o.Require(r["selected"].get<int>() > 0 && r["rejected"].get<int>() > 0, "both groups non-empty");
  o.Require(r["selected_mean_add"].get<double>() < r["rejected_mean_add"].get<double>(),
            "selected ADD < rejected ADD");
  o.Require(r["probe_iou"].get<double>() > 0.95, "probe IoU > 0.95");
  o.Require(r["probe_rejected_by_geometry"].get<bool>(), "probe rejected by d_g");
  o.Require(secs < 120.0, "runtime < 2 min");
  return o;
}

// Reference benchmark for one master seed: dataset 200/150/50 with 5-10
// instances, default pipeline settings.
struct Benchmark {
  simdata::Dataset dataset;
  simdata::GroundTruthStore gt;
  pipeline::PipelineConfig config;
};

Benchmark MakeBenchmark(std::uint64_t seed) {
  Benchmark b;
  b.config.seed = seed;
  b.config.dataset.seed = seed;
  b.dataset = simdata::GenerateDataset(b.config.dataset, simdata::ReferenceObjects());
  b.gt = std::move(b.dataset.withheld);
  b.dataset.withheld.clear();
  return b;
}

std::vector<pipeline::IterationReport> RunLoop(const Benchmark& b, const pipeline::PipelineConfig& cfg,
                                               const fs::path& out,
                                               std::optional<estimator::EstimatorState> teacher = {}) {
  const pipeline::Workspace ws(b.dataset, cfg);
  pipeline::LoopOptions loop;
  loop.out_dir = out;
  loop.eval_gt = &b.gt;
  loop.teacher = std::move(teacher);
  return pipeline::IterativeSelfTraining(ws, loop);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

Outcome Criterion6(const fs::path& out) {
  Outcome o;
  const auto start = Clock::now();
  std::vector<double> r0, r3, r5;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Benchmark b = MakeBenchmark(seed);
    pipeline::PipelineConfig cfg = b.config;
    cfg.iterations = 5;
    const auto reports = RunLoop(b, cfg, out / ("seed_" + std::to_string(seed)));
    r0.push_back(reports[0].mean_recall);
    r3.push_back(reports[3].mean_recall);
    r5.push_back(reports[5].mean_recall);
    std::cout << "  seed " << seed << ": recall it0 " << r0.back() << ", it3 " << r3.back()
              << ", it5 " << r5.back() << " (" << Since(start) << " s elapsed)" << std::endl;
  }
  const double secs = Since(start);
  const double m0 = Median(r0), m3 = Median(r3), m5 = Median(r5);
  o.detail << "median recall it0 " << m0 << ", it3 " << m3 << ", it5 " << m5 << ", " << secs << " s";
  o.Require(m3 > m0, "median it3 > median it0");
  o.Require(m5 >= m3 - 0.02, "median it5 >= median it3 - 0.02");
  o.Require(secs < 1200.0, "runtime < 20 min");
  return o;
}

// Three selection modes from one shared teacher, seed 1, three iterations.
std::vector<std::vector<pipeline::IterationReport>> RunAblation(const fs::path& out) {
  const Benchmark b = MakeBenchmark(1);
  pipeline::PipelineConfig cfg = b.config;
  cfg.iterations = 3;
  const estimator::EstimatorState teacher =
      pipeline::TrainTeacher(pipeline::Workspace(b.dataset, cfg), nullptr).state;
  std::vector<std::vector<pipeline::IterationReport>> all;
  for (auto mode : {selection::SelectionMode::kAppearanceAndGeometry,
                    selection::SelectionMode::kAppearanceOnly,
                    selection::SelectionMode::kGeometryOnly}) {
    cfg.selection.mode = mode;
    all.push_back(RunLoop(b, cfg, out / selection::ToString(mode), teacher));
  }
  return all;
}

Outcome Criterion7(const fs::path& out) {
  Outcome o;
  const auto start = Clock::now();
  const auto all = RunAblation(out);
  const double full = all[0][3].mean_recall, app = all[1][3].mean_recall, geo = all[2][3].mean_recall;
  auto selected = [](const std::vector<pipeline::IterationReport>& r) {
    std::size_t n = 0;
    for (const auto& x : r) n += x.total_selected();
    return n;
  };
  o.detail << "it3 recall both " << full << ", appearance " << app << ", geometry " << geo
           << "; selected totals " << selected(all[0]) << "/" << selected(all[1]) << "/"
           << selected(all[2]) << ", " << Since(start) << " s";
  for (const auto& r : all) o.Require(r.size() == 4, "all configurations report");
  o.Require(selected(all[1]) > 0 && selected(all[2]) > 0, "ablations select labels");
  o.Require(full >= std::max(app, geo) - 0.02, "both >= max(ablations) - 0.02");
  return o;
}

int CompareReports(const fs::path& a, const fs::path& b, Outcome& o) {
  int compared = 0;
  for (int k = 0;; ++k) {
    const fs::path fa = a / pipeline::ReportFileName(k);
    if (!fs::exists(fa)) break;
    ++compared;
    o.Require(fs::exists(b / pipeline::ReportFileName(k)) && Slurp(fa) == Slurp(b / pipeline::ReportFileName(k)),
              "identical " + (a.filename() / pipeline::ReportFileName(k)).string());
  }
  return compared;
}

Outcome Criterion8(const fs::path& out) {
  Outcome o;
  const auto start = Clock::now();
  const fs::path rerun = out / "rerun";
  fs::remove_all(rerun);
  int files = 0;

  fs::create_directories(rerun / "c5");
  pipeline::WriteJsonFile(SelectionBenchmark(), rerun / "c5" / "selection.json");
  o.Require(fs::exists(out / "c5" / "selection.json"), "criterion 5 output present");
  o.Require(Slurp(out / "c5" / "selection.json") == Slurp(rerun / "c5" / "selection.json"),
            "identical selection.json");
  ++files;

  {
    const Benchmark b = MakeBenchmark(1);
    pipeline::PipelineConfig cfg = b.config;
    cfg.iterations = 5;
    RunLoop(b, cfg, rerun / "c6" / "seed_1");
    const int n = CompareReports(out / "c6" / "seed_1", rerun / "c6" / "seed_1", o);
    o.Require(n == 6, "six criterion 6 reports present");
    files += n;
  }

  RunAblation(rerun / "c7");
  for (const char* mode : {"both", "appearance", "geometry"}) {
    const int n = CompareReports(out / "c7" / mode, rerun / "c7" / mode, o);
    o.Require(n == 4, std::string("four criterion 7 reports for ") + mode);
    files += n;
  }
  o.detail << files << " report files compared byte-for-byte, " << Since(start) << " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  std::string out = "acceptance_out";
  app.add_option("criterion", criterion, "criterion number (2-8)")->required()->check(CLI::Range(2, 8));
  app.add_option("--out", out, "output directory for criteria 5-8");
  CLI11_PARSE(app, argc, argv);

  const fs::path dir(out);
  Outcome o;
  try {
    switch (criterion) {
      case 2: o = Criterion2(); break;
      case 3: o = Criterion3(); break;
      case 4: o = Criterion4(); break;
      case 5: o = Criterion5(dir / "c5"); break;
      case 6: o = Criterion6(dir / "c6"); break;
      case 7: o = Criterion7(dir / "c7"); break;
      case 8: o = Criterion8(dir); break;
    }
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  std::cout << "criterion " << criterion << ": " << (o.pass ? "PASS" : "FAIL") << "  "
            << o.detail.str() << std::endl;
  return o.pass ? 0 : 1;
}
