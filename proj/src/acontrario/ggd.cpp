#include "ufo/ggd.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "ufo/error.hpp"

namespace ufo {

namespace {
constexpr std::size_t kMinSamples = 100;
constexpr int kBisectionSteps = 200;
}  // namespace

double ggd_moment_ratio(double beta) {
  return std::exp(std::lgamma(1.0 / beta) + std::lgamma(3.0 / beta) - 2.0 * std::lgamma(2.0 / beta));
}

GgdFit fit_ggd(std::span<const double> samples) {
  if (samples.size() < kMinSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "GGD fit needs at least 100 samples, got " + std::to_string(samples.size()));
  }
  double m1 = 0.0;
  double m2 = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "GGD fit input contains a non-finite value");
    m1 += std::abs(v);
    m2 += v * v;
  }
  const double n = static_cast<double>(samples.size());
  m1 /= n;
  m2 /= n;
  const auto [lo_it, hi_it] = std::ranges::minmax_element(samples);
  if (*lo_it == *hi_it || !(m2 > 0.0)) throw Error(ErrorCode::ZeroVariance, "GGD fit on constant data");

  const double target = m2 / (m1 * m1);
  GgdFit fit;
  if (target >= ggd_moment_ratio(kMinGgdShape)) {
    fit.beta = kMinGgdShape;
  } else if (target <= ggd_moment_ratio(kMaxGgdShape)) {
    fit.beta = kMaxGgdShape;
  } else {
    double lo = kMinGgdShape;
    double hi = kMaxGgdShape;
    for (int i = 0; i < kBisectionSteps && hi - lo > 1e-14; ++i) {
      const double mid = 0.5 * (lo + hi);
      // ratio decreases with beta: too large a ratio means beta is too small.
      if (ggd_moment_ratio(mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    fit.beta = 0.5 * (lo + hi);
  }
  fit.alpha = std::sqrt(m2 * std::exp(std::lgamma(1.0 / fit.beta) - std::lgamma(3.0 / fit.beta)));
  return fit;
}

double ggd_upper_tail(double v, const GgdFit& fit) {
  const double a = std::abs(v);
  if (a == 0.0) return 0.5;
  const double z = std::pow(a / fit.alpha, fit.beta);
  return 0.5 * boost::math::gamma_q(1.0 / fit.beta, z);
}

double gaussianize_value(double v, const GgdFit& fit) {
  if (v == 0.0) return 0.0;
  const double tail = ggd_upper_tail(v, fit);
  double g;
  if (tail <= 0.0) {
    g = kGaussianizeClamp;
  } else {
    // Upper standard-normal quantile of `tail`: sqrt(2) * erfc^-1(2 tail).
    g = std::sqrt(2.0) * boost::math::erfc_inv(2.0 * tail);
  }
  g = std::min(g, kGaussianizeClamp);
  return v > 0.0 ? g : -g;
}

Plane gaussianize(const Plane& plane, const GgdFit& fit) {
  if (!(fit.alpha > 0.0) || !(fit.beta > 0.0) || !std::isfinite(fit.alpha) || !std::isfinite(fit.beta)) {
    throw Error(ErrorCode::InvalidArgument, "invalid GGD fit");
  }
  Plane out(plane.width(), plane.height());
  auto src = plane.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = gaussianize_value(src[i], fit);
  return out;
}

}  // namespace ufo
