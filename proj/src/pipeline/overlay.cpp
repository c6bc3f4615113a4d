#include "ufo/overlay.hpp"

#include <algorithm>
#include <array>

namespace ufo {

namespace {

void draw_outline(ImageBuffer& img, const BoundingBox& box, const std::array<double, 3>& rgb, double gray) {
  const int x0 = std::max(box.x, 0), y0 = std::max(box.y, 0);
  const int x1 = std::min(box.right(), img.width()), y1 = std::min(box.bottom(), img.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const bool edge = x - box.x < kOutlineWidth || box.right() - 1 - x < kOutlineWidth ||
                        y - box.y < kOutlineWidth || box.bottom() - 1 - y < kOutlineWidth;
      if (!edge) continue;
      if (img.channels() == 3) {
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = rgb[c];
      } else {
        img.at(x, y, 0) = gray;
      }
    }
  }
}

}  // namespace

ImageBuffer render_overlay(const ImageBuffer& img, const std::vector<BoundingBox>& boxes,
                           const std::vector<BoundingBox>* ground_truth) {
  ImageBuffer out = img;
  if (ground_truth != nullptr) {
    for (const auto& b : *ground_truth) draw_outline(out, b, {0.0, 255.0, 0.0}, 0.0);
  }
  for (const auto& b : boxes) draw_outline(out, b, {255.0, 0.0, 0.0}, 255.0);
  return out;
}

}  // namespace ufo
