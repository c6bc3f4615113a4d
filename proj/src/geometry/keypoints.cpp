#include "ufo/keypoints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "ufo/filter.hpp"

namespace ufo {

std::string_view to_string(KeypointDetector d) {
  switch (d) {
    case KeypointDetector::Corner: return "corner";
    case KeypointDetector::Blob: return "blob";
    case KeypointDetector::FastIntensity: return "fast-intensity";
  }
  return "unknown";
}

std::size_t InterestPointSet::count(KeypointDetector d) const {
  return static_cast<std::size_t>(std::ranges::count_if(points, [d](const auto& p) { return p.detector == d; }));
}

namespace {

constexpr int kMinDetectorSide = 7;

bool stronger(const InterestPoint& a, const InterestPoint& b) {
  if (a.response != b.response) return a.response > b.response;
  return std::tie(a.y, a.x) < std::tie(b.y, b.x);
}

void keep_strongest(std::vector<InterestPoint>& pts, int n) {
  std::ranges::sort(pts, stronger);
  if (static_cast<int>(pts.size()) > n) pts.resize(std::max(n, 0));
}

// Plateau-safe 3x3 maximum: strictly above neighbours that come earlier in
// raster order, at least equal to later ones.
bool local_max(const Plane& r, int x, int y) {
  const double v = r(x, y);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (!dx && !dy) continue;
      const int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= r.width() || ny >= r.height()) continue;
      const double n = r(nx, ny);
      const bool earlier = dy < 0 || (dy == 0 && dx < 0);
      if (earlier ? n >= v : n > v) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<InterestPoint> harris_corners(const Plane& lum, const KeypointParams& params) {
  const int w = lum.width(), h = lum.height();
  std::vector<InterestPoint> out;
  if (w < kMinDetectorSide || h < kMinDetectorSide) return out;

  Plane ixx(w, h), iyy(w, h), ixy(w, h);
  for (int y = 0; y < h; ++y) {
    const int ym = mirror_index(y - 1, h), yp = mirror_index(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = mirror_index(x - 1, w), xp = mirror_index(x + 1, w);
      // Sobel, scaled to intensity units per pixel.
      const double gx = ((lum(xp, ym) + 2 * lum(xp, y) + lum(xp, yp)) - (lum(xm, ym) + 2 * lum(xm, y) + lum(xm, yp))) / 8.0;
      const double gy = ((lum(xm, yp) + 2 * lum(x, yp) + lum(xp, yp)) - (lum(xm, ym) + 2 * lum(x, ym) + lum(xp, ym))) / 8.0;
      ixx(x, y) = gx * gx;
      iyy(x, y) = gy * gy;
      ixy(x, y) = gx * gy;
    }
  }
  const Plane sxx = gaussian_blur(ixx, params.harris_window_sigma);
  const Plane syy = gaussian_blur(iyy, params.harris_window_sigma);
  const Plane sxy = gaussian_blur(ixy, params.harris_window_sigma);

  Plane resp(w, h);
  double peak = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = sxx(x, y), b = syy(x, y), c = sxy(x, y);
      const double r = a * b - c * c - params.harris_k * (a + b) * (a + b);
      resp(x, y) = r;
      peak = std::max(peak, r);
    }
  }
  const double thresh = std::max(params.harris_min_response, params.harris_relative_threshold * peak);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      if (resp(x, y) > thresh && local_max(resp, x, y)) {
        out.push_back({static_cast<double>(x), static_cast<double>(y), resp(x, y), KeypointDetector::Corner});
      }
    }
  }
  keep_strongest(out, params.per_detector);
  return out;
}

std::vector<InterestPoint> dog_blobs(const Plane& lum, const KeypointParams& params) {
  std::vector<InterestPoint> out;
  const int layers = params.dog_intervals + 3;
  // The input is assumed to carry a blur of 0.5 already.
  constexpr double kAssumedBlur = 0.5;
  Plane base = gaussian_blur(lum, std::sqrt(params.dog_sigma * params.dog_sigma - kAssumedBlur * kAssumedBlur));

  for (int o = 0; o < params.dog_octaves; ++o) {
    const int w = base.width(), h = base.height();
    if (w < kMinDetectorSide || h < kMinDetectorSide) break;

    std::vector<Plane> gauss{base};
    for (int i = 1; i < layers; ++i) {
      const double prev = params.dog_sigma * std::pow(2.0, (i - 1.0) / params.dog_intervals);
      const double next = params.dog_sigma * std::pow(2.0, static_cast<double>(i) / params.dog_intervals);
      gauss.push_back(gaussian_blur(gauss.back(), std::sqrt(next * next - prev * prev)));
    }
    std::vector<Plane> dog;
    for (int i = 0; i + 1 < layers; ++i) {
      Plane d(w, h);
      auto a = gauss[i + 1].data();
      auto b = gauss[i].data();
      auto dst = d.data();
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = a[p] - b[p];
      dog.push_back(std::move(d));
    }

    const double factor = std::ldexp(1.0, o);
    const double edge = (params.dog_edge_ratio + 1) * (params.dog_edge_ratio + 1) / params.dog_edge_ratio;
    for (int s = 1; s + 1 < static_cast<int>(dog.size()); ++s) {
      const Plane& cur = dog[s];
      for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
          const double v = cur(x, y);
          if (std::abs(v) < params.dog_contrast) continue;
          bool extremum = true;
          for (int ds = -1; ds <= 1 && extremum; ++ds) {
            const Plane& layer = dog[s + ds];
            for (int dy = -1; dy <= 1 && extremum; ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                if (!ds && !dx && !dy) continue;
                const double n = layer(x + dx, y + dy);
                if (v > 0 ? n >= v : n <= v) {
                  extremum = false;
                  break;
                }
              }
            }
          }
          if (!extremum) continue;
          // Reject edge-like responses via the 2x2 Hessian of the DoG layer.
          const double dxx = cur(x + 1, y) + cur(x - 1, y) - 2 * v;
          const double dyy = cur(x, y + 1) + cur(x, y - 1) - 2 * v;
          const double dxy = 0.25 * (cur(x + 1, y + 1) - cur(x - 1, y + 1) - cur(x + 1, y - 1) + cur(x - 1, y - 1));
          const double tr = dxx + dyy;
          const double det = dxx * dyy - dxy * dxy;
          if (det <= 0 || tr * tr / det >= edge) continue;
          out.push_back({x * factor, y * factor, std::abs(v), KeypointDetector::Blob});
        }
      }
    }

    // Next octave starts from the layer at twice the base blur.
    const Plane& src = gauss[params.dog_intervals];
    Plane next(w / 2, h / 2);
    for (int y = 0; y < next.height(); ++y) {
      for (int x = 0; x < next.width(); ++x) next(x, y) = src(2 * x, 2 * y);
    }
    base = std::move(next);
  }
  keep_strongest(out, params.per_detector);
  return out;
}

std::vector<InterestPoint> fast_corners(const Plane& lum, const KeypointParams& params) {
  static constexpr std::array<std::array<int, 2>, 16> kCircle{{{0, -3}, {1, -3}, {2, -2}, {3, -1},
                                                              {3, 0}, {3, 1}, {2, 2}, {1, 3},
                                                              {0, 3}, {-1, 3}, {-2, 2}, {-3, 1},
                                                              {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}}};
  constexpr int kArc = 9;
  const int w = lum.width(), h = lum.height();
  std::vector<InterestPoint> out;
  if (w < kMinDetectorSide || h < kMinDetectorSide) return out;

  // score = largest margin m such that 9 contiguous circle pixels are all
  // brighter than p + m or all darker than p - m; a corner iff score > threshold.
  Plane score(w, h, 0.0);
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      const double p = lum(x, y);
      std::array<double, 16> diff{};
      for (int i = 0; i < 16; ++i) diff[i] = lum(x + kCircle[i][0], y + kCircle[i][1]) - p;
      double best = 0.0;
      for (int start = 0; start < 16; ++start) {
        double bright = diff[start];
        double dark = -diff[start];
        for (int j = 1; j < kArc; ++j) {
          const double d = diff[(start + j) % 16];
          bright = std::min(bright, d);
          dark = std::min(dark, -d);
        }
        best = std::max({best, bright, dark});
      }
      if (best > params.fast_threshold) score(x, y) = best;
    }
  }
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      if (score(x, y) > 0.0 && local_max(score, x, y)) {
        out.push_back({static_cast<double>(x), static_cast<double>(y), score(x, y), KeypointDetector::FastIntensity});
      }
    }
  }
  keep_strongest(out, params.per_detector);
  return out;
}

InterestPointSet detect_interest_points(const ImageBuffer& img, const KeypointParams& params) {
  InterestPointSet set;
  if (img.width() < kMinDetectorSide || img.height() < kMinDetectorSide || params.per_detector <= 0) return set;
  const Plane lum = luminance(img);
  for (auto&& pts : {harris_corners(lum, params), dog_blobs(lum, params), fast_corners(lum, params)}) {
    set.points.insert(set.points.end(), pts.begin(), pts.end());
  }
  return set;
}

InterestPointSet detect_interest_points(const ImageBuffer& img, int per_detector) {
  KeypointParams params;
  params.per_detector = per_detector;
  return detect_interest_points(img, params);
}

std::vector<BoundingBox> keypoint_refine(const std::vector<BoundingBox>& boxes, const InterestPointSet& points) {
  std::vector<BoundingBox> out;
  for (const auto& b : boxes) {
    const bool hit = std::ranges::any_of(points.points, [&](const InterestPoint& p) {
      return p.x >= b.x && p.x <= b.x + b.w - 1 && p.y >= b.y && p.y <= b.y + b.h - 1;
    });
    if (hit) out.push_back(b);
  }
  return out;
}

}  // namespace ufo
