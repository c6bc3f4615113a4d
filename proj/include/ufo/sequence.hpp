#pragma once

#include <filesystem>
#include <vector>

#include "ufo/pipeline.hpp"

namespace ufo {

struct SequenceOptions {
  bool overlay = false;      // also write <frame>_overlay.png
  bool write_timing = false;  // include timing_ms in the records
};

// Raster files (png, ppm, pgm, pnm) of `dir`, sorted by file name.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

// Processes the frames of `input_dir` in order, writing <frame>.json per frame
// and a manifest. Input and output problems are reported before any frame
// is processed.
std::vector<FrameResult> run_sequence(const std::filesystem::path& input_dir, const PipelineConfig& cfg,
                                      const std::filesystem::path& output_dir, const SequenceOptions& opts = {});

}  // namespace ufo
