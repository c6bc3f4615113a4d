#include "ufo/filter.hpp"

#include <cmath>
#include <string>

#include "ufo/error.hpp"

namespace ufo {

DiskKernel::DiskKernel(int radius) : radius_(radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "disk radius must be >= 1");
  const int r2 = radius * radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= r2) taps_.push_back({dx, dy, 0.0});
    }
  }
  const double w = 1.0 / static_cast<double>(taps_.size());
  for (auto& t : taps_) t.weight = w;
}

std::vector<double> DiskKernel::weights() const {
  const int side = 2 * radius_ + 1;
  std::vector<double> grid(static_cast<std::size_t>(side) * side, 0.0);
  for (const auto& t : taps_) {
    grid[static_cast<std::size_t>(t.dy + radius_) * side + (t.dx + radius_)] = t.weight;
  }
  return grid;
}

Plane convolve_disk(const Plane& plane, const DiskKernel& kernel) {
  const int r = kernel.radius();
  const int w = plane.width();
  const int h = plane.height();
  if (w < 2 * r + 1 || h < 2 * r + 1) {
    throw Error(ErrorCode::ImageTooSmall,
                "plane " + std::to_string(w) + "x" + std::to_string(h) +
                    " is smaller than a radius-" + std::to_string(r) + " disk");
  }

  // Mirror-padded copy so the inner loop needs no index arithmetic.
  const int pw = w + 2 * r;
  const int ph = h + 2 * r;
  std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    const int sy = mirror_index(y - r, h);
    for (int x = 0; x < pw; ++x) {
      padded[static_cast<std::size_t>(y) * pw + x] = plane(mirror_index(x - r, w), sy);
    }
  }

  // Disk rows are contiguous runs: sum each run, scale once.
  std::vector<std::pair<int, int>> runs(2 * r + 1, {0, -1});
  for (const auto& t : kernel.taps()) {
    auto& run = runs[t.dy + r];
    run.first = std::min(run.first, t.dx);
    run.second = std::max(run.second, t.dx);
  }
  const double weight = kernel.taps().front().weight;

  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const double* row = padded.data() + static_cast<std::size_t>(y + r + dy) * pw + (x + r);
        const auto [lo, hi] = runs[dy + r];
        for (int dx = lo; dx <= hi; ++dx) acc += row[dx];
      }
      out(x, y) = acc * weight;
    }
  }
  return out;
}

Plane gaussian_blur(const Plane& plane, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;

  const int w = plane.width();
  const int h = plane.height();
  if (plane.empty()) throw Error(ErrorCode::EmptyImage, "cannot blur an empty plane");
  Plane tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += taps[i + radius] * plane(mirror_index(x + i, w), y);
      tmp(x, y) = acc;
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += taps[i + radius] * tmp(x, mirror_index(y + i, h));
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace ufo
