#include "ufo/boxes.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace ufo {

bool box_less(const BoundingBox& a, const BoundingBox& b) {
  return std::tie(a.y, a.x, a.w, a.h) < std::tie(b.y, b.x, b.w, b.h);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const long ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const long iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const long inter = ix * iy;
  const long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

bool clip_box(BoundingBox& box, int width, int height) {
  const int x0 = std::max(box.x, 0);
  const int y0 = std::max(box.y, 0);
  const int x1 = std::min(box.right(), width);
  const int y1 = std::min(box.bottom(), height);
  if (x1 <= x0 || y1 <= y0) return false;
  box.x = x0;
  box.y = y0;
  box.w = x1 - x0;
  box.h = y1 - y0;
  return true;
}

std::vector<BoundingBox> boxes_from_detections(const std::vector<Detection>& dets, int image_width,
                                               int image_height) {
  std::vector<Detection> sorted = dets;
  std::ranges::sort(sorted, detection_less);
  std::vector<BoundingBox> out;
  out.reserve(sorted.size());
  for (const auto& d : sorted) {
    const long factor = 1L << d.scale;
    // floor((x + 0.5) * 2^s) == x * 2^s + 2^(s-1) for s >= 1, x for s = 0.
    const long cx = d.x * factor + factor / 2;
    const long cy = d.y * factor + factor / 2;
    const long side = (2L * d.radius + 1) * factor;
    BoundingBox b{static_cast<int>(cx - side / 2), static_cast<int>(cy - side / 2), static_cast<int>(side),
                  static_cast<int>(side), d.log_nfa};
    if (clip_box(b, image_width, image_height)) out.push_back(b);
  }
  return out;
}

namespace {

// One round of paint + 8-connected labelling.
std::vector<BoundingBox> fuse_once(const std::vector<BoundingBox>& boxes, int width, int height) {
  std::vector<int> label(static_cast<std::size_t>(width) * height, -1);
  std::vector<char> mask(label.size(), 0);
  for (const auto& b : boxes) {
    for (int y = b.y; y < b.bottom(); ++y) {
      std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(y) * width + b.x, b.w, 1);
    }
  }

  std::vector<BoundingBox> comps;
  std::vector<int> stack;
  for (int y0 = 0; y0 < height; ++y0) {
    for (int x0 = 0; x0 < width; ++x0) {
      const std::size_t seed = static_cast<std::size_t>(y0) * width + x0;
      if (!mask[seed] || label[seed] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      int minx = x0, maxx = x0, miny = y0, maxy = y0;
      label[seed] = id;
      stack.assign(1, static_cast<int>(seed));
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int x = idx % width;
        const int y = idx / width;
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * width + nx;
            if (mask[n] && label[n] < 0) {
              label[n] = id;
              stack.push_back(static_cast<int>(n));
            }
          }
        }
      }
      comps.push_back({minx, miny, maxx - minx + 1, maxy - miny + 1, std::numeric_limits<double>::infinity()});
    }
  }
  for (const auto& b : boxes) {
    auto& c = comps[label[static_cast<std::size_t>(b.y) * width + b.x]];
    c.score = std::min(c.score, b.score);
  }
  std::ranges::sort(comps, box_less);
  return comps;
}

}  // namespace

std::vector<BoundingBox> fuse_overlapping(const std::vector<BoundingBox>& boxes, int image_width, int image_height) {
  std::vector<BoundingBox> current;
  current.reserve(boxes.size());
  for (BoundingBox b : boxes) {
    if (clip_box(b, image_width, image_height)) current.push_back(b);
  }
  if (current.empty()) return current;
  std::ranges::sort(current, box_less);
  // Component rectangles can overlap one another (e.g. two L shapes); repeat
  // until the count stops shrinking. Equal counts mean every component holds
  // exactly one rectangle, which is then a fixed point.
  while (true) {
    auto next = fuse_once(current, image_width, image_height);
    if (next.size() == current.size()) return next;
    current = std::move(next);
  }
}

}  // namespace ufo
