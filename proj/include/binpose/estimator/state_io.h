#pragma once

#include <filesystem>
#include <string>

#include "binpose/estimator/estimator.h"

namespace binpose::estimator {

inline constexpr char kStateMagic[8] = {'B', 'P', 'E', 'S', 'T', 'A', 'T', 'E'};
inline constexpr std::uint32_t kStateVersion = 1;

/// Little-endian binary layout, see docs/file_formats.md.
std::string SerializeState(const EstimatorState& state);
/// Throws DataError (file name "<memory>") on a bad magic, a version
/// mismatch or truncation.
EstimatorState DeserializeState(const std::string& bytes);

void SaveState(const EstimatorState& state, const std::filesystem::path& path);
EstimatorState LoadState(const std::filesystem::path& path);

}  // namespace binpose::estimator
