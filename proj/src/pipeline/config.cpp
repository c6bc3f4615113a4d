#include "ufo/config.hpp"

#include <algorithm>

#include "ufo/error.hpp"

namespace ufo {

void PipelineConfig::validate(int channels) const {
  denoise.validate(channels);
  if (n_scales < 1) throw Error(ErrorCode::InvalidArgument, "n_scales must be >= 1");
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "radii must not be empty");
  for (int r : radii) {
    if (r < 1 || r > 8) {
      throw Error(ErrorCode::InvalidArgument, "radius " + std::to_string(r) + " outside [1, 8]");
    }
  }
  if (per_detector < 1) throw Error(ErrorCode::InvalidArgument, "per_detector must be >= 1");
  if (reuse_dict < 1) throw Error(ErrorCode::InvalidArgument, "reuse_dict must be >= 1");
}

int PipelineConfig::max_radius() const { return radii.empty() ? 0 : std::ranges::max(radii); }

nlohmann::json to_json(const PipelineConfig& cfg) {
  const auto& d = cfg.denoise;
  nlohmann::json dn = {
      {"patch_side", d.patch_side},
      {"dict_size", d.dict_size},
      {"ormp_epsilon", d.ormp_epsilon},
      {"ksvd_iters", d.k_iter},
      {"stride", d.stride},
      {"keep_better_code", d.keep_better_code},
  };
  dn["lambda"] = d.lambda ? nlohmann::json(*d.lambda) : nlohmann::json(nullptr);
  dn["sigma"] = d.sigma ? nlohmann::json(*d.sigma) : nlohmann::json(nullptr);
  dn["max_atoms"] = d.max_atoms ? nlohmann::json(*d.max_atoms) : nlohmann::json(nullptr);
  return {
      {"denoise", dn},
      {"n_scales", cfg.n_scales},
      {"radii", cfg.radii},
      {"log_eps", cfg.log_eps},
      {"refine_keypoints", cfg.refine_keypoints},
      {"per_detector", cfg.per_detector},
      {"seed", cfg.seed},
      {"reuse_dict", cfg.reuse_dict},
  };
}

}  // namespace ufo
