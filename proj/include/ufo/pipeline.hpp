#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ufo/boxes.hpp"
#include "ufo/config.hpp"
#include "ufo/dictionary.hpp"
#include "ufo/image.hpp"

namespace ufo {

struct DetectionCount {
  int scale = 0;
  int radius = 0;
  std::size_t count = 0;

  bool operator==(const DetectionCount&) const = default;
};

struct FrameResult {
  std::string frame_id;
  std::vector<BoundingBox> boxes;         // sorted by (y, x, w, h)
  std::vector<DetectionCount> counts;     // every (scale, radius) pair, zeros included
  std::map<std::string, double> timing_ms;
};

// One dictionary per pyramid level.
using LevelDictionaries = std::vector<Dictionary>;

// Seed of a frame's random streams; level l uses mix_seed(frame_seed, l).
std::uint64_t frame_seed(std::uint64_t seed, std::string_view frame_id);

// pyramid -> per-level denoise and residual -> detect -> boxes -> fuse ->
// optional keypoint refinement. When `dicts` is non-null and already holds one
// dictionary per level with matching patch size, learning is skipped and
// those are used; otherwise the learned dictionaries are stored into it.
// Failures are rethrown with the stage name prefixed to the message.
FrameResult run_frame(const ImageBuffer& img, const PipelineConfig& cfg, std::uint64_t seed,
                      LevelDictionaries* dicts = nullptr);

}  // namespace ufo
