#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "binpose/selection/scores.h"

namespace binpose::selection {

struct ScoreRecord {
  std::string scene_id;
  int instance_id = 0;
  SelectionScores scores;
  bool selected = false;
};

/// Header: scene_id,instance_id,d_mask,d_image,d_a,d_g,selected
void WriteScoresCsv(const std::vector<ScoreRecord>& rows,
                    const std::filesystem::path& path);
std::vector<ScoreRecord> ReadScoresCsv(const std::filesystem::path& path);

}  // namespace binpose::selection
