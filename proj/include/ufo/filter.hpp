#pragma once

#include <vector>

#include "ufo/image.hpp"

namespace ufo {

// Half-sample symmetric reflection (…cba|abc…|cba…), repeated with period
// 2n so any integer maps into [0, n). With a kernel symmetric in each axis
// this extension keeps the plane sum unchanged.
inline int mirror_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

struct KernelTap {
  int dx;
  int dy;
  double weight;
};

// Mean filter over the integer points within Euclidean distance `radius`.
class DiskKernel {
 public:
  explicit DiskKernel(int radius);

  int radius() const noexcept { return radius_; }
  int support_size() const noexcept { return static_cast<int>(taps_.size()); }
  const std::vector<KernelTap>& taps() const noexcept { return taps_; }

  // (2r+1)^2 grid, row-major, zero outside the disk.
  std::vector<double> weights() const;

 private:
  int radius_;
  std::vector<KernelTap> taps_;
};

Plane convolve_disk(const Plane& plane, const DiskKernel& kernel);

// Separable Gaussian with radius ceil(3 sigma), unit-sum taps, mirror borders.
Plane gaussian_blur(const Plane& plane, double sigma);

}  // namespace ufo
