#pragma once

#include <vector>

#include "ufo/boxes.hpp"
#include "ufo/image.hpp"

namespace ufo {

inline constexpr int kOutlineWidth = 2;

// Copy of `img` with 2-pixel box outlines drawn just inside each box.
// Ground truth is drawn first (green, or black on grayscale), detections on
// top (red, or white on grayscale).
ImageBuffer render_overlay(const ImageBuffer& img, const std::vector<BoundingBox>& boxes,
                           const std::vector<BoundingBox>* ground_truth = nullptr);

}  // namespace ufo
