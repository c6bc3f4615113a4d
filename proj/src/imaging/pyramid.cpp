#include "ufo/pyramid.hpp"

#include <algorithm>
#include <string>

#include "ufo/error.hpp"
#include "ufo/filter.hpp"

namespace ufo {

int max_feasible_scales(int width, int height, int min_level_side) {
  int side = std::min(width, height);
  int n = 0;
  while (side >= std::max(min_level_side, 1)) {
    ++n;
    side /= 2;
  }
  return n;
}

Pyramid build_pyramid(const ImageBuffer& img, int n_scales, int min_level_side) {
  if (n_scales < 1) throw Error(ErrorCode::InvalidArgument, "n_scales must be >= 1");
  if (img.empty()) throw Error(ErrorCode::EmptyImage, "cannot build a pyramid of an empty image");
  const int feasible = max_feasible_scales(img.width(), img.height(), min_level_side);
  if (n_scales > feasible) {
    throw Error(ErrorCode::ImageTooSmall,
                std::to_string(img.width()) + "x" + std::to_string(img.height()) + " image supports at most " +
                    std::to_string(feasible) + " scales for a minimum level side of " +
                    std::to_string(min_level_side) + " (requested " + std::to_string(n_scales) + ")");
  }

  Pyramid pyr;
  pyr.levels.reserve(n_scales);
  pyr.levels.push_back(img);
  for (int s = 1; s < n_scales; ++s) {
    const ImageBuffer& prev = pyr.levels.back();
    const int w = prev.width() / 2;
    const int h = prev.height() / 2;
    ImageBuffer next(w, h, prev.channels());
    for (int c = 0; c < prev.channels(); ++c) {
      const Plane blurred = gaussian_blur(prev.plane(c), kPyramidSigma);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) next.at(x, y, c) = blurred(2 * x, 2 * y);
      }
    }
    pyr.levels.push_back(std::move(next));
  }
  return pyr;
}

}  // namespace ufo
