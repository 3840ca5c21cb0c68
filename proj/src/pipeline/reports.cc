#include "binpose/pipeline/reports.h"

#include <fstream>

#include "binpose/errors.h"

namespace binpose::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json Opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> GetOpt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::size_t IterationReport::total_selected() const {
  std::size_t n = 0;
  for (const auto& o : objects) n += o.selected;
  return n;
}

std::size_t IterationReport::total_predicted() const {
  std::size_t n = 0;
  for (const auto& o : objects) n += o.predicted;
  return n;
}

json ToJson(const IterationReport& r) {
  json objects = json::array();
  for (const auto& o : r.objects) {
    objects.push_back({{"object_id", o.object_id},
                       {"predicted", o.predicted},
                       {"selected", o.selected},
                       {"sentinel", o.sentinel},
                       {"tau_a", Opt(o.tau_a)},
                       {"tau_g", Opt(o.tau_g)},
                       {"selected_mean_d_a", Opt(o.selected_mean_d_a)},
                       {"selected_mean_d_g", Opt(o.selected_mean_d_g)},
                       {"rejected_mean_d_a", Opt(o.rejected_mean_d_a)},
                       {"rejected_mean_d_g", Opt(o.rejected_mean_d_g)},
                       {"selected_mean_add", Opt(o.selected_mean_add)},
                       {"rejected_mean_add", Opt(o.rejected_mean_add)},
                       {"recall", o.recall},
                       {"eval_instances", o.eval_instances}});
  }
  return {{"iteration", r.iteration},
          {"selection_mode", r.selection_mode},
          {"stall", r.stall},
          {"training_loss", r.training_loss},
          {"synthetic_recall", Opt(r.synthetic_recall)},
          {"objects", objects},
          {"mean_recall", r.mean_recall}};
}

IterationReport ReportFromJson(const json& j) {
  IterationReport r;
  r.iteration = j.at("iteration").get<int>();
  r.selection_mode = j.value("selection_mode", std::string());
  r.stall = j.value("stall", false);
  r.training_loss = j.value("training_loss", 0.0);
  r.synthetic_recall = GetOpt(j, "synthetic_recall");
  r.mean_recall = j.at("mean_recall").get<double>();
  for (const auto& oj : j.at("objects")) {
    ObjectIterationStats o;
    o.object_id = oj.at("object_id").get<std::string>();
    o.predicted = oj.at("predicted").get<std::size_t>();
    o.selected = oj.at("selected").get<std::size_t>();
    o.sentinel = oj.value("sentinel", std::size_t{0});
    o.tau_a = GetOpt(oj, "tau_a");
    o.tau_g = GetOpt(oj, "tau_g");
    o.selected_mean_d_a = GetOpt(oj, "selected_mean_d_a");
    o.selected_mean_d_g = GetOpt(oj, "selected_mean_d_g");
    o.rejected_mean_d_a = GetOpt(oj, "rejected_mean_d_a");
    o.rejected_mean_d_g = GetOpt(oj, "rejected_mean_d_g");
    o.selected_mean_add = GetOpt(oj, "selected_mean_add");
    o.rejected_mean_add = GetOpt(oj, "rejected_mean_add");
    o.recall = oj.at("recall").get<double>();
    o.eval_instances = oj.value("eval_instances", std::size_t{0});
    r.objects.push_back(std::move(o));
  }
  return r;
}

std::string ReportFileName(int iteration) {
  return "report_iter_" + std::to_string(iteration) + ".json";
}
std::string ScoresFileName(int iteration) {
  return "scores_iter_" + std::to_string(iteration) + ".csv";
}
std::string StateFileName(int iteration) {
  return "state_iter_" + std::to_string(iteration) + ".bin";
}

void WriteJsonFile(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw DataError(path.string(), "write failed");
}

void WriteReport(const IterationReport& report, const fs::path& dir) {
  WriteJsonFile(ToJson(report), dir / ReportFileName(report.iteration));
}

std::vector<IterationReport> ReadReports(const fs::path& dir) {
  std::vector<IterationReport> out;
  for (int k = 0;; ++k) {
    const fs::path path = dir / ReportFileName(k);
    if (!fs::exists(path)) break;
    std::ifstream in(path);
    try {
      out.push_back(ReportFromJson(json::parse(in)));
    } catch (const json::exception& e) {
      throw DataError(path.string(), e.what());
    }
  }
  return out;
}

void WriteTiming(const std::vector<IterationReport>& reports, const fs::path& dir) {
  json j = json::array();
  for (const auto& r : reports) j.push_back({{"iteration", r.iteration}, {"wall_seconds", r.wall_seconds}});
  WriteJsonFile(j, dir / "timing.json");
}

}  // namespace binpose::pipeline
