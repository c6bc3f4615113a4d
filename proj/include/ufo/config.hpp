#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "ufo/denoise.hpp"

namespace ufo {

struct PipelineConfig {
  DenoiseParams denoise;  // denoise.stride is the patch sampling stride
  int n_scales = 4;
  std::vector<int> radii{1, 2, 3};
  double log_eps = -2.0;
  bool refine_keypoints = true;
  int per_detector = 200;
  std::uint64_t seed = 0;
  // Number of consecutive frames sharing one set of learned dictionaries;
  // 1 learns afresh on every frame.
  int reuse_dict = 1;

  // Throws InvalidArgument naming the offending field.
  void validate(int channels = 3) const;
  int max_radius() const;
};

nlohmann::json to_json(const PipelineConfig& cfg);

}  // namespace ufo
