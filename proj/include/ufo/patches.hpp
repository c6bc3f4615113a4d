#pragma once

#include <Eigen/Core>

#include <vector>

#include "ufo/image.hpp"

namespace ufo {

struct PatchOrigin {
  int y;  // row of the top-left corner
  int x;  // column of the top-left corner

  bool operator==(const PatchOrigin&) const = default;
};

// side x side windows flattened into columns. Column layout is channel-major:
// all values of channel 0 in row-major order, then channel 1, then channel 2.
struct PatchMatrix {
  int side = 0;
  int channels = 0;
  Eigen::MatrixXd columns;  // patch_dim x count
  std::vector<PatchOrigin> origins;

  int patch_dim() const noexcept { return side * side * channels; }
  int count() const noexcept { return static_cast<int>(origins.size()); }
};

// Patch origins along one axis: 0, stride, 2*stride, ... plus the last valid
// position (length - side) so every pixel is covered.
std::vector<int> patch_positions(int length, int side, int stride);

PatchMatrix extract_patches(const ImageBuffer& img, int side, int stride = 1);

// Running sums for overlapping patch placement.
struct PatchAccumulator {
  ImageBuffer sums;
  Plane counts;

  PatchAccumulator(int width, int height, int channels)
      : sums(width, height, channels), counts(width, height) {}
};

// Adds each column back at its origin and bumps the per-pixel coverage count.
void place_patches(PatchAccumulator& acc, int side, const std::vector<PatchOrigin>& origins,
                   const Eigen::MatrixXd& columns);

}  // namespace ufo
