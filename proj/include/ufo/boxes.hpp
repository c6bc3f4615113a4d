#pragma once

#include <vector>

#include "ufo/detect.hpp"

namespace ufo {

// Axis-aligned box at level-0 resolution; covers [x, x + w) x [y, y + h).
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  double score = 0.0;  // minimum log_nfa of the contributing detections

  int right() const noexcept { return x + w; }
  int bottom() const noexcept { return y + h; }
  long area() const noexcept { return static_cast<long>(w) * h; }

  bool operator==(const BoundingBox&) const = default;
};

// Order used for every box list: (y, x, w, h).
bool box_less(const BoundingBox& a, const BoundingBox& b);

double iou(const BoundingBox& a, const BoundingBox& b);

// Clip to [0, width) x [0, height); returns false if nothing remains.
bool clip_box(BoundingBox& box, int width, int height);

// A detection at scale s, radius r, pixel (x, y) becomes the square of side
// (2r + 1) 2^s centred on floor((x + 0.5) 2^s), floor((y + 0.5) 2^s), clipped
// to the level-0 image.
std::vector<BoundingBox> boxes_from_detections(const std::vector<Detection>& dets, int image_width,
                                               int image_height);

// Paints the boxes into a mask and replaces each 8-connected component by
// its bounding rectangle (score = min member score). Repeated until the
// rectangles no longer touch, so the result is a fixed point.
std::vector<BoundingBox> fuse_overlapping(const std::vector<BoundingBox>& boxes, int image_width, int image_height);

}  // namespace ufo
