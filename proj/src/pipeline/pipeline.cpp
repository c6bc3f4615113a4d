#include "ufo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

#include "ufo/denoise.hpp"
#include "ufo/detect.hpp"
#include "ufo/error.hpp"
#include "ufo/keypoints.hpp"
#include "ufo/pyramid.hpp"
#include "ufo/random.hpp"

namespace ufo {

std::uint64_t frame_seed(std::uint64_t seed, std::string_view frame_id) {
  return mix_seed(seed, hash_string(frame_id));
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs fn, prefixing any library error with the stage name.
template <class F>
auto staged(const std::string& stage, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), stage + ": " + e.what());
  }
}

bool dictionaries_fit(const LevelDictionaries& dicts, int levels, int patch_dim) {
  return static_cast<int>(dicts.size()) == levels &&
         std::ranges::all_of(dicts, [&](const Dictionary& d) { return d.patch_dim() == patch_dim; });
}

}  // namespace

FrameResult run_frame(const ImageBuffer& img, const PipelineConfig& cfg, std::uint64_t seed,
                      LevelDictionaries* dicts) {
  const auto start = Clock::now();
  FrameResult result;
  staged("config", [&] {
    cfg.validate(img.channels());
    return 0;
  });

  auto t = Clock::now();
  const int min_side = std::max(cfg.denoise.patch_side, 2 * cfg.max_radius() + 1);
  const Pyramid pyr = staged("pyramid", [&] { return build_pyramid(img, cfg.n_scales, min_side); });
  result.timing_ms["pyramid"] = elapsed_ms(t);

  t = Clock::now();
  const int patch_dim = cfg.denoise.patch_side * cfg.denoise.patch_side * img.channels();
  const bool reuse = dicts != nullptr && dictionaries_fit(*dicts, pyr.n_scales(), patch_dim);
  LevelDictionaries learned;
  std::vector<Residual> residuals;
  for (int s = 0; s < pyr.n_scales(); ++s) {
    const std::string stage = "denoise (scale " + std::to_string(s) + ")";
    DenoiseParams params = cfg.denoise;
    params.rng_seed = mix_seed(seed, static_cast<std::uint64_t>(s));
    const DenoiseResult dr = staged(stage, [&] {
      return reuse ? denoise_with_dictionary(pyr.levels[s], params, (*dicts)[s]) : denoise(pyr.levels[s], params);
    });
    residuals.push_back(staged(stage, [&] { return residual(pyr.levels[s], dr.estimate); }));
    if (!reuse) learned.push_back(dr.dictionary);
  }
  if (dicts != nullptr && !reuse) *dicts = std::move(learned);
  result.timing_ms["denoise"] = elapsed_ms(t);

  t = Clock::now();
  DetectParams dp;
  dp.radii = cfg.radii;
  dp.log_eps = cfg.log_eps;
  const auto detections = staged("detect", [&] { return detect(residuals, dp); });
  result.timing_ms["detect"] = elapsed_ms(t);

  for (int s = 0; s < pyr.n_scales(); ++s) {
    for (int r : cfg.radii) {
      const auto n = std::ranges::count_if(detections, [&](const Detection& d) { return d.scale == s && d.radius == r; });
      result.counts.push_back({s, r, static_cast<std::size_t>(n)});
    }
  }

  t = Clock::now();
  result.boxes = staged("boxes", [&] {
    return fuse_overlapping(boxes_from_detections(detections, img.width(), img.height()), img.width(), img.height());
  });
  result.timing_ms["boxes"] = elapsed_ms(t);

  if (cfg.refine_keypoints && !result.boxes.empty()) {
    t = Clock::now();
    result.boxes = staged("refine", [&] {
      return keypoint_refine(result.boxes, detect_interest_points(pyr.levels[0], cfg.per_detector));
    });
    result.timing_ms["refine"] = elapsed_ms(t);
  }
  result.timing_ms["total"] = elapsed_ms(start);
  return result;
}

}  // namespace ufo
