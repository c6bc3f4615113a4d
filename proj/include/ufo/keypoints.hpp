#pragma once

#include <string_view>
#include <vector>

#include "ufo/boxes.hpp"
#include "ufo/image.hpp"

namespace ufo {

enum class KeypointDetector { Corner, Blob, FastIntensity };

std::string_view to_string(KeypointDetector d);

struct InterestPoint {
  double x = 0.0;  // level-0 pixel coordinates
  double y = 0.0;
  double response = 0.0;
  KeypointDetector detector = KeypointDetector::Corner;
};

struct InterestPointSet {
  std::vector<InterestPoint> points;

  std::size_t count(KeypointDetector d) const;
};

// Detector constants; intensities are on the 0..255 scale.
struct KeypointParams {
  int per_detector = 200;
  // Harris: det(M) - k tr(M)^2 on a Gaussian-weighted structure tensor.
  double harris_k = 0.04;
  double harris_window_sigma = 1.0;
  double harris_relative_threshold = 0.01;
  double harris_min_response = 1.0;
  // Difference of Gaussians.
  int dog_octaves = 3;
  int dog_intervals = 3;
  double dog_sigma = 1.6;
  double dog_contrast = 0.04 / 3.0 * 255.0;
  double dog_edge_ratio = 10.0;
  // Segment test on the radius-3 Bresenham circle, 9 contiguous pixels.
  double fast_threshold = 20.0;
};

// Runs the corner, blob and segment-test detectors on the luminance plane and
// keeps the per_detector strongest of each (ties broken by (y, x)).
// Images too small for the detector windows give an empty set.
InterestPointSet detect_interest_points(const ImageBuffer& img, const KeypointParams& params);
InterestPointSet detect_interest_points(const ImageBuffer& img, int per_detector = 200);

std::vector<InterestPoint> harris_corners(const Plane& lum, const KeypointParams& params);
std::vector<InterestPoint> dog_blobs(const Plane& lum, const KeypointParams& params);
std::vector<InterestPoint> fast_corners(const Plane& lum, const KeypointParams& params);

// Keeps boxes containing at least one point; both box edges are inclusive.
std::vector<BoundingBox> keypoint_refine(const std::vector<BoundingBox>& boxes, const InterestPointSet& points);

}  // namespace ufo
