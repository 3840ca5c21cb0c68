#include "binpose/selection/score_table.h"

#include <fstream>
#include <sstream>

#include "binpose/errors.h"
#include "binpose/util/number_format.h"

namespace binpose::selection {

namespace {
constexpr const char* kHeader = "scene_id,instance_id,d_mask,d_image,d_a,d_g,selected";
}  // namespace

void WriteScoresCsv(const std::vector<ScoreRecord>& rows,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  out << kHeader << '\n';
  using util::FormatDouble;
  for (const ScoreRecord& r : rows) {
    out << r.scene_id << ',' << r.instance_id << ',' << FormatDouble(r.scores.d_mask)
        << ',' << FormatDouble(r.scores.d_image) << ',' << FormatDouble(r.scores.d_a)
        << ',' << FormatDouble(r.scores.d_g) << ',' << (r.selected ? 1 : 0) << '\n';
  }
  if (!out) throw DataError(path.string(), "write failed");
}

std::vector<ScoreRecord> ReadScoresCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), "cannot open");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw DataError(path.string(), "unexpected header");
  }
  std::vector<ScoreRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw DataError(path.string(), "expected 7 columns");
    auto num = [&](const std::string& s) {
      auto v = util::ParseDouble(s);
      if (!v) throw DataError(path.string(), "bad number '" + s + "'");
      return *v;
    };
    ScoreRecord r;
    r.scene_id = f[0];
    r.instance_id = static_cast<int>(num(f[1]));
    r.scores = {num(f[2]), num(f[3]), num(f[4]), num(f[5])};
    r.selected = f[6] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace binpose::selection
