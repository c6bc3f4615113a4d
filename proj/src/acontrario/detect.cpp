#include "ufo/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "ufo/error.hpp"
#include "ufo/filter.hpp"
#include "ufo/ggd.hpp"

namespace ufo {

bool detection_less(const Detection& a, const Detection& b) {
  return std::tie(a.scale, a.channel, a.radius, a.y, a.x) < std::tie(b.scale, b.channel, b.radius, b.y, b.x);
}

namespace {

constexpr std::size_t kMinFitSamples = 100;

struct Moments {
  double mean;
  double variance;
};

Moments moments(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / n};
}

void check_radii(const std::vector<int>& radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "at least one kernel radius is required");
  for (int r : radii) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "kernel radius must be >= 1");
  }
}

}  // namespace

Plane standardize_filtered(const Plane& plane) {
  if (plane.empty()) throw Error(ErrorCode::EmptyImage, "cannot standardize an empty plane");
  const auto [mean, var] = moments(plane.data());
  if (!(var > 0.0)) throw Error(ErrorCode::ZeroVariance, "cannot standardize a constant plane");
  const double inv_sd = 1.0 / std::sqrt(var);
  Plane out(plane.width(), plane.height());
  auto src = plane.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - mean) * inv_sd;
  return out;
}

double significance_threshold(std::uint64_t n_tests, double log_eps) {
  if (std::isnan(log_eps)) throw Error(ErrorCode::NonFinite, "log_eps is NaN");
  if (log_nfa(0.0, n_tests) <= log_eps) return 0.0;
  double lo = 0.0;
  double hi = 64.0;
  if (log_nfa(hi, n_tests) > log_eps) return std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_nfa(mid, n_tests) <= log_eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

void detect_in_normal_plane(const Plane& normal, int scale, int channel, const std::vector<int>& radii,
                            std::uint64_t n_tests, double log_eps, std::vector<Detection>& out) {
  check_radii(radii);
  // A conservative lower bound on |z|; exact log_nfa decides.
  const double z_min = significance_threshold(n_tests, log_eps);
  if (!std::isfinite(z_min)) return;
  for (int r : radii) {
    if (normal.width() < 2 * r + 1 || normal.height() < 2 * r + 1) continue;
    const Plane filtered = convolve_disk(normal, DiskKernel(r));
    const auto [mean, var] = moments(filtered.data());
    if (!(var > 0.0)) continue;
    const Plane z = standardize_filtered(filtered);
    for (int y = 0; y < z.height(); ++y) {
      for (int x = 0; x < z.width(); ++x) {
        const double v = z(x, y);
        if (std::abs(v) < z_min) continue;
        const double lnfa = log_nfa(v, n_tests);
        if (lnfa <= log_eps) out.push_back({scale, channel, r, x, y, lnfa});
      }
    }
  }
}

TestBudget residual_test_budget(const std::vector<Residual>& residual_pyramid, int n_kernels) {
  if (residual_pyramid.empty()) throw Error(ErrorCode::InvalidArgument, "empty residual pyramid");
  const std::size_t channels = residual_pyramid.front().channels.size();
  std::vector<std::pair<int, int>> sizes;
  for (const auto& level : residual_pyramid) {
    if (level.channels.size() != channels || channels == 0) {
      throw Error(ErrorCode::DimensionMismatch, "residual levels disagree on channel count");
    }
    sizes.emplace_back(level.width(), level.height());
  }
  return compute_test_budget(sizes, n_kernels, static_cast<int>(channels));
}

std::vector<Detection> detect(const std::vector<Residual>& residual_pyramid, const DetectParams& params) {
  check_radii(params.radii);
  return detect(residual_pyramid, params, residual_test_budget(residual_pyramid, static_cast<int>(params.radii.size())));
}

std::vector<Detection> detect(const std::vector<Residual>& residual_pyramid, const DetectParams& params,
                              const TestBudget& budget) {
  check_radii(params.radii);
  if (residual_pyramid.empty()) throw Error(ErrorCode::InvalidArgument, "empty residual pyramid");
  std::vector<Detection> out;
  if (params.log_eps == -std::numeric_limits<double>::infinity()) return out;

  for (std::size_t s = 0; s < residual_pyramid.size(); ++s) {
    const auto& level = residual_pyramid[s];
    for (std::size_t c = 0; c < level.channels.size(); ++c) {
      const Plane& plane = level.channels[c];
      if (plane.size() < kMinFitSamples) continue;
      double energy = 0.0;
      for (double v : plane.data()) energy += v * v;
      if (std::sqrt(energy / static_cast<double>(plane.size())) <= params.min_residual_rms) continue;
      const auto [lo, hi] = std::ranges::minmax_element(plane.data());
      if (*lo == *hi) continue;

      const GgdFit fit = fit_ggd(plane);
      const Plane normal = gaussianize(plane, fit);
      detect_in_normal_plane(normal, static_cast<int>(s), static_cast<int>(c), params.radii, budget.total,
                             params.log_eps, out);
    }
  }
  std::ranges::sort(out, detection_less);
  return out;
}

}  // namespace ufo
