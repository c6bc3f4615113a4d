#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ufo/denoise.hpp"
#include "ufo/image.hpp"
#include "ufo/nfa.hpp"

namespace ufo {

// One pixel whose filtered, standardized residual is significant.
struct Detection {
  int scale = 0;
  int channel = 0;
  int radius = 0;
  int x = 0;
  int y = 0;
  double log_nfa = 0.0;  // base 10

  bool operator==(const Detection&) const = default;
};

// Canonical order: (scale, channel, radius, y, x).
bool detection_less(const Detection& a, const Detection& b);

struct DetectParams {
  std::vector<int> radii{1, 2, 3};
  double log_eps = -2.0;
  // Residual planes with RMS at or below this carry no evidence (exactly
  // reconstructed content) and are skipped; their pixels still count as tests.
  double min_residual_rms = 1e-9;
};

// (plane - mean) / std with the population (1/N) standard deviation.
// Throws ZeroVariance for a constant plane.
Plane standardize_filtered(const Plane& plane);

// Smallest |z| with log_nfa(z, n_tests) <= log_eps; +inf if none.
double significance_threshold(std::uint64_t n_tests, double log_eps);

// Disk filtering, standardization and NFA thresholding of a plane that is
// already Gaussianized. Appends to `out` without sorting.
void detect_in_normal_plane(const Plane& normal, int scale, int channel, const std::vector<int>& radii,
                            std::uint64_t n_tests, double log_eps, std::vector<Detection>& out);

// Full a-contrario stage over a residual pyramid (index = scale). The test
// budget covers every pixel of every channel at every scale for each radius.
// Each (scale, channel) plane gets its own GGD fit and Gaussianization.
std::vector<Detection> detect(const std::vector<Residual>& residual_pyramid, const DetectParams& params);

// Same, but with an explicit budget (e.g. shared across a frame).
std::vector<Detection> detect(const std::vector<Residual>& residual_pyramid, const DetectParams& params,
                              const TestBudget& budget);

TestBudget residual_test_budget(const std::vector<Residual>& residual_pyramid, int n_kernels);

}  // namespace ufo
