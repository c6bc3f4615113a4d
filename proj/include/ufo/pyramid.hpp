#pragma once

#include <vector>

#include "ufo/image.hpp"

namespace ufo {

inline constexpr double kPyramidSigma = 0.8;

// Dyadic Gaussian pyramid; levels[0] is the input.
struct Pyramid {
  std::vector<ImageBuffer> levels;

  int n_scales() const noexcept { return static_cast<int>(levels.size()); }
  static constexpr int scale_factor = 2;
};

// Level s+1 = level s blurred (sigma 0.8) and decimated by two per axis.
// Throws ImageTooSmall, naming the largest feasible n_scales, when the
// coarsest level would be narrower than `min_level_side`.
Pyramid build_pyramid(const ImageBuffer& img, int n_scales, int min_level_side = 1);

// Largest n such that floor(min(w, h) / 2^(n-1)) >= min_level_side (0 if none).
int max_feasible_scales(int width, int height, int min_level_side);

}  // namespace ufo
