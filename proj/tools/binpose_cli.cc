// binpose: dataset generation, teacher training, self-training and reports.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "binpose/errors.h"
#include "binpose/estimator/state_io.h"
#include "binpose/pipeline/config.h"
#include "binpose/pipeline/pipeline.h"
#include "binpose/pipeline/plots.h"
#include "binpose/simdata/dataset.h"
#include "binpose/simdata/shapes.h"

namespace fs = std::filesystem;
using namespace binpose;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitStall = 4;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> iters;
  std::string out;
  std::string state_path;
  std::string reports_dir;
  bool oracle_train = false;
};

pipeline::PipelineConfig LoadConfig(const Options& opt) {
  pipeline::PipelineConfig cfg;
  if (!opt.config_path.empty()) cfg = pipeline::PipelineConfig::Load(opt.config_path);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    cfg.dataset.seed = *opt.seed;
  }
  if (opt.iters) cfg.iterations = *opt.iters;
  cfg.Validate();
  return cfg;
}

fs::path OutDir(const Options& opt, const std::string& fallback) {
  fs::path dir = opt.out.empty() ? fs::path(fallback) : fs::path(opt.out);
  fs::create_directories(dir);
  return dir;
}

int RunGen(const Options& opt) {
  const pipeline::PipelineConfig cfg = LoadConfig(opt);
  const fs::path out = OutDir(opt, cfg.dataset_dir);
  const simdata::Dataset ds = simdata::GenerateDataset(cfg.dataset, simdata::ReferenceObjects());
  simdata::WriteDataset(ds, out);
  std::cout << "wrote " << ds.scenes.size() << " scenes to " << out.string() << '\n';
  return kExitOk;
}

int RunTeach(const Options& opt) {
  const pipeline::PipelineConfig cfg = LoadConfig(opt);
  const fs::path out = OutDir(opt, cfg.report_dir);
  const simdata::Dataset ds = simdata::ReadDataset(cfg.dataset_dir);
  const simdata::GroundTruthStore gt = simdata::ReadGroundTruth(cfg.dataset_dir);
  const pipeline::Workspace ws(ds, cfg);
  const pipeline::TeacherResult t = pipeline::TrainTeacher(ws, &gt);
  estimator::SaveState(t.state, out / pipeline::StateFileName(0));
  pipeline::WriteReport(t.report, out);
  std::cout << "teacher: synthetic recall " << t.report.synthetic_recall.value_or(0.0)
            << ", eval recall " << t.report.mean_recall << '\n';
  return kExitOk;
}

int PrintReports(const std::vector<pipeline::IterationReport>& reports) {
  for (const auto& r : reports) {
    std::cout << "iteration " << r.iteration << ": selected " << r.total_selected() << '/'
              << r.total_predicted() << ", eval recall " << r.mean_recall
              << (r.stall ? " (stall)" : "") << '\n';
  }
  return reports.size() > 1 && reports[1].stall ? kExitStall : kExitOk;
}

int RunSelfTrain(const Options& opt) {
  const pipeline::PipelineConfig cfg = LoadConfig(opt);
  const fs::path out = OutDir(opt, cfg.report_dir);
  const simdata::Dataset ds = simdata::ReadDataset(cfg.dataset_dir);
  const simdata::GroundTruthStore gt = simdata::ReadGroundTruth(cfg.dataset_dir);
  const pipeline::Workspace ws(ds, cfg);
  pipeline::LoopOptions loop;
  loop.out_dir = out;
  loop.eval_gt = &gt;
  return PrintReports(pipeline::IterativeSelfTraining(ws, loop));
}

int RunEval(const Options& opt) {
  const pipeline::PipelineConfig cfg = LoadConfig(opt);
  const fs::path out = OutDir(opt, cfg.report_dir);
  const simdata::Dataset ds = simdata::ReadDataset(cfg.dataset_dir);
  const simdata::GroundTruthStore gt = simdata::ReadGroundTruth(cfg.dataset_dir);
  const pipeline::Workspace ws(ds, cfg);
  estimator::EstimatorState state = opt.state_path.empty()
                                        ? pipeline::TrainTeacher(ws, nullptr).state
                                        : estimator::LoadState(opt.state_path);
  if (opt.oracle_train) state = pipeline::TrainOnRealLabels(ws, state, gt);
  const pipeline::RecallTable table = pipeline::Evaluate(ws, state, gt);
  pipeline::WriteRecallTable(table, out / "recall.csv", out / "recall.json");
  for (std::size_t i = 0; i < table.object_ids.size(); ++i) {
    std::cout << table.object_ids[i] << ": " << table.recall[i] << " (" << table.counts[i]
              << " instances)\n";
  }
  std::cout << "mean: " << table.mean << '\n';
  return kExitOk;
}

int RunPlot(const Options& opt) {
  const fs::path in = opt.reports_dir.empty() ? fs::path(".") : fs::path(opt.reports_dir);
  const auto reports = pipeline::ReadReports(in);
  if (reports.empty()) throw DataError((in / pipeline::ReportFileName(0)).string(), "no reports found");
  const fs::path out = OutDir(opt, in.string());
  pipeline::EmitPlots(reports, out);
  std::cout << "plotted " << reports.size() << " reports\n";
  return kExitOk;
}

int RunAblate(const Options& opt) {
  pipeline::PipelineConfig cfg = LoadConfig(opt);
  const fs::path out = OutDir(opt, cfg.report_dir);
  const simdata::Dataset ds = simdata::ReadDataset(cfg.dataset_dir);
  const simdata::GroundTruthStore gt = simdata::ReadGroundTruth(cfg.dataset_dir);
  std::optional<estimator::EstimatorState> teacher;
  nlohmann::json summary = nlohmann::json::object();
  int code = kExitOk;
  for (auto mode : {selection::SelectionMode::kAppearanceAndGeometry,
                    selection::SelectionMode::kAppearanceOnly,
                    selection::SelectionMode::kGeometryOnly}) {
    cfg.selection.mode = mode;
    const pipeline::Workspace ws(ds, cfg);
    if (!teacher) teacher = pipeline::TrainTeacher(ws, nullptr).state;
    pipeline::LoopOptions loop;
    loop.out_dir = out / selection::ToString(mode);
    loop.eval_gt = &gt;
    loop.teacher = teacher;
    std::cout << "[" << selection::ToString(mode) << "]\n";
    const auto reports = pipeline::IterativeSelfTraining(ws, loop);
    if (PrintReports(reports) == kExitStall) code = kExitStall;
    nlohmann::json recall = nlohmann::json::array(), selected = nlohmann::json::array();
    for (const auto& r : reports) {
      recall.push_back(r.mean_recall);
      selected.push_back(r.total_selected());
    }
    summary[selection::ToString(mode)] = {{"recall", recall}, {"selected", selected}};
  }
  pipeline::WriteJsonFile(summary, out / "ablation.json");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-training 6D pose estimation for bin picking"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "pipeline config JSON");
    cmd->add_option("--seed", opt.seed, "master seed override");
    cmd->add_option("--out", opt.out, "output directory");
  };
  CLI::App* gen = app.add_subcommand("gen", "generate the synthetic and shifted datasets");
  add_common(gen);
  CLI::App* teach = app.add_subcommand("teach", "train the teacher on the synthetic split");
  add_common(teach);
  CLI::App* selftrain = app.add_subcommand("selftrain", "run the iterative self-training loop");
  add_common(selftrain);
  selftrain->add_option("--iters", opt.iters, "number of self-training iterations");
  CLI::App* eval = app.add_subcommand("eval", "ADD(-S) recall on the eval split");
  add_common(eval);
  eval->add_option("--state", opt.state_path, "estimator state (default: fresh teacher)");
  eval->add_flag("--oracle-train", opt.oracle_train,
                 "also train on the unlabeled split's withheld labels (upper bound)");
  CLI::App* plot = app.add_subcommand("plot", "render SVG charts from report files");
  plot->add_option("--reports", opt.reports_dir, "directory holding report_iter_*.json");
  plot->add_option("--out", opt.out, "output directory");
  CLI::App* ablate = app.add_subcommand("ablate", "compare the three selection modes");
  add_common(ablate);
  ablate->add_option("--iters", opt.iters, "number of self-training iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen) return RunGen(opt);
    if (*teach) return RunTeach(opt);
    if (*selftrain) return RunSelfTrain(opt);
    if (*eval) return RunEval(opt);
    if (*plot) return RunPlot(opt);
    if (*ablate) return RunAblate(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const AccessError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
