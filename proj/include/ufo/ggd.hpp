#pragma once

#include <span>

#include "ufo/image.hpp"

namespace ufo {

inline constexpr double kMinGgdShape = 0.2;
inline constexpr double kMaxGgdShape = 5.0;
inline constexpr double kGaussianizeClamp = 8.0;

// Zero-mean generalized Gaussian: density proportional to exp(-(|v| / alpha)^beta).
struct GgdFit {
  double alpha = 1.0;  // scale
  double beta = 2.0;   // shape, within [0.2, 5]
  double mu = 0.0;     // location, always 0
};

// E v^2 / (E |v|)^2 as a function of the shape; strictly decreasing in beta.
double ggd_moment_ratio(double beta);

// Moment matching: beta solves ggd_moment_ratio(beta) = mean(v^2) / mean(|v|)^2
// by bisection (clamped to [0.2, 5]); alpha then matches mean(v^2).
// Throws InvalidArgument below 100 samples and ZeroVariance for constant data.
GgdFit fit_ggd(std::span<const double> samples);
inline GgdFit fit_ggd(const Plane& plane) { return fit_ggd(plane.data()); }

// P(V > |v|) for V ~ GGD(alpha, beta); accurate deep into the tail.
double ggd_upper_tail(double v, const GgdFit& fit);

// Probability-integral transform to N(0, 1): Phi^-1(F_ggd(v)), clamped to [-8, 8].
// Odd in v.
double gaussianize_value(double v, const GgdFit& fit);
Plane gaussianize(const Plane& plane, const GgdFit& fit);

}  // namespace ufo
