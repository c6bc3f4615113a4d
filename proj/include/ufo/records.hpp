#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "ufo/pipeline.hpp"

namespace ufo {

// {"frame", "boxes": [{x, y, w, h, log_nfa}], "timing_ms"}; timing is
// optional so that records of repeated runs compare byte for byte.
nlohmann::json frame_record(const FrameResult& result, bool with_timing);
FrameResult parse_frame_record(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Every *.json record in `dir` except the run manifest, ordered by file name.
std::vector<FrameResult> read_result_dir(const std::filesystem::path& dir);

inline constexpr const char* kManifestName = "manifest.json";

}  // namespace ufo
