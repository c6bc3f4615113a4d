#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "scenes.hpp"
#include "ufo/detect.hpp"
#include "ufo/ggd.hpp"
#include "ufo/nfa.hpp"
#include "ufo/pyramid.hpp"

using namespace ufo;
using scenes::error_of;

namespace {

std::vector<double> ggd_samples(double alpha, double beta, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(count);
  for (double& x : v) x = scenes::sample_ggd(rng, alpha, beta);
  return v;
}

Plane normal_plane(int w, int h, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Plane p(w, h);
  for (double& v : p.data()) v = normal(rng);
  return p;
}

std::vector<Residual> normal_residual_pyramid(int side, int scales, int channels, std::mt19937_64& rng) {
  std::vector<Residual> pyr;
  for (int s = 0; s < scales; ++s) {
    Residual r;
    for (int c = 0; c < channels; ++c) r.channels.push_back(normal_plane(side >> s, side >> s, rng));
    pyr.push_back(std::move(r));
  }
  return pyr;
}

}  // namespace

// ---------------------------------------------------------------- ggd

TEST(Ggd, MomentRatioKnownShapes) {
  EXPECT_NEAR(ggd_moment_ratio(2.0), M_PI / 2.0, 1e-12);
  EXPECT_NEAR(ggd_moment_ratio(1.0), 2.0, 1e-12);
  for (double b = 0.3; b < 5.0; b += 0.1) EXPECT_GT(ggd_moment_ratio(b), ggd_moment_ratio(b + 0.1));
}

TEST(Ggd, RecoversGaussianShape) {
  const GgdFit fit = fit_ggd(ggd_samples(std::sqrt(2.0), 2.0, 100000, 1));
  EXPECT_GE(fit.beta, 1.8);
  EXPECT_LE(fit.beta, 2.2);
  EXPECT_NEAR(fit.alpha, std::sqrt(2.0), 0.05);
  EXPECT_EQ(fit.mu, 0.0);
}

TEST(Ggd, RecoversLaplacianShape) {
  const GgdFit fit = fit_ggd(ggd_samples(2.0, 1.0, 100000, 2));
  EXPECT_GE(fit.beta, 0.9);
  EXPECT_LE(fit.beta, 1.1);
}

TEST(Ggd, ShapeClampedToRange) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? 1.0 : -1.0;
  const GgdFit fit = fit_ggd(v);
  EXPECT_EQ(fit.beta, kMaxGgdShape);
}

TEST(Ggd, ConstantIsZeroVariance) {
  EXPECT_EQ(error_of([] { fit_ggd(Plane(20, 20, 3.0)); }), ErrorCode::ZeroVariance);
}

TEST(Ggd, TooFewSamplesIsError) {
  EXPECT_EQ(error_of([] { fit_ggd(std::vector<double>(99, 1.0)); }), ErrorCode::InvalidArgument);
}

TEST(Gaussianize, ZeroMapsToZero) {
  EXPECT_EQ(gaussianize_value(0.0, {1.7, 0.9, 0.0}), 0.0);
}

TEST(Gaussianize, StandardNormalFitIsIdentity) {
  const GgdFit fit{std::sqrt(2.0), 2.0, 0.0};
  for (double v = -4.0; v <= 4.0; v += 0.05) EXPECT_NEAR(gaussianize_value(v, fit), v, 1e-6);
}

TEST(Gaussianize, MonotoneAndOdd) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int t = 0; t < 20; ++t) {
    const GgdFit fit{u(rng), u(rng), 0.0};
    double prev = -std::numeric_limits<double>::infinity();
    for (double v = -30.0; v <= 30.0; v += 0.01) {
      const double z = gaussianize_value(v, fit);
      EXPECT_GE(z, prev);
      EXPECT_EQ(gaussianize_value(-v, fit), -z);
      prev = z;
    }
  }
}

TEST(Gaussianize, ClampedAtEight) {
  const GgdFit fit{1.0, 2.0, 0.0};
  EXPECT_EQ(gaussianize_value(1e6, fit), kGaussianizeClamp);
  EXPECT_EQ(gaussianize_value(-1e6, fit), -kGaussianizeClamp);
}

TEST(Gaussianize, FittedSamplesLookNormal) {
  for (double beta : {0.8, 1.0, 2.0, 3.0}) {
    const std::vector<double> v = ggd_samples(5.0, beta, 100000, 4);
    const GgdFit fit = fit_ggd(v);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
      const double z = gaussianize_value(x, fit);
      m2 += z * z;
      m4 += z * z * z * z;
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    EXPECT_GE(m2, 0.9) << beta;
    EXPECT_LE(m2, 1.1) << beta;
    EXPECT_NEAR(m4 / (m2 * m2) - 3.0, 0.0, 0.3) << beta;
  }
}

TEST(Ggd, UpperTailMatchesGaussian) {
  const GgdFit fit{std::sqrt(2.0), 2.0, 0.0};
  EXPECT_NEAR(ggd_upper_tail(1.0, fit), 0.5 * std::erfc(1.0 / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(ggd_upper_tail(0.0, fit), 0.5, 1e-15);
}

// ---------------------------------------------------------------- nfa

TEST(LogNfa, ZeroValueIsFullMass) { EXPECT_NEAR(log_nfa(0.0, 1000000), 6.0, 1e-12); }

TEST(LogNfa, FiveSigma) { EXPECT_NEAR(log_nfa(5.0, 1000000), 6.0 + std::log10(std::erfc(5.0 / std::sqrt(2.0))), 1e-9); }

TEST(LogNfa, FiveSigmaPrinted) { EXPECT_NEAR(log_nfa(5.0, 1000000), -0.2416, 1e-4); }

TEST(LogNfa, MonotoneAndSymmetric) {
  for (double v = 0.0; v < 37.0; v += 0.25) {
    EXPECT_GT(log_nfa(v, 100), log_nfa(v + 0.25, 100));
    EXPECT_EQ(log_nfa(v, 100), log_nfa(-v, 100));
  }
}

TEST(LogNfa, DeepTailStaysFinite) {
  const double v = log_nfa(38.0, 1);
  EXPECT_TRUE(std::isfinite(v));
  // log10 erfc(38 / sqrt 2) from an arbitrary-precision evaluation.
  EXPECT_NEAR(v, -315.2387597, 1e-6);
  EXPECT_TRUE(std::isfinite(log_nfa(1000.0, 1)));
}

TEST(LogNfa, NanIsError) { EXPECT_EQ(error_of([] { log_nfa(std::nan(""), 10); }), ErrorCode::NonFinite); }

TEST(LogErfc, MatchesStdNearOrigin) {
  for (double x = 0.0; x < 20.0; x += 0.5) EXPECT_NEAR(log_erfc(x), std::log(std::erfc(x)), 1e-10);
}

TEST(TestBudget, SixtyFourRgb) {
  const TestBudget b = compute_test_budget(build_pyramid(ImageBuffer(64, 64, 3), 4), 3, 3);
  EXPECT_EQ(b.total, 48960u);
  EXPECT_EQ(b.pixel_counts, (std::vector<std::uint64_t>{4096, 1024, 256, 64}));
}

TEST(TestBudget, SingleLevel) {
  EXPECT_EQ(compute_test_budget({{10, 10}}, 1, 1).total, 100u);
}

TEST(TestBudget, ChannelFactorIsThree) {
  const auto rgb = compute_test_budget({{37, 21}, {18, 10}}, 3, 3).total;
  const auto gray = compute_test_budget({{37, 21}, {18, 10}}, 3, 1).total;
  EXPECT_EQ(rgb, 3 * gray);
}

// ---------------------------------------------------------------- detection

TEST(Standardize, UnitVarianceAndAffineInvariance) {
  std::mt19937_64 rng(5);
  const Plane p = normal_plane(30, 20, rng, 4.0);
  const Plane z = standardize_filtered(p);
  double m = 0.0;
  double v = 0.0;
  for (double x : z.data()) m += x;
  m /= static_cast<double>(z.size());
  for (double x : z.data()) v += (x - m) * (x - m);
  EXPECT_NEAR(v / static_cast<double>(z.size()), 1.0, 1e-9);
  EXPECT_NEAR(m, 0.0, 1e-12);
  Plane q = p;
  for (double& x : q.data()) x = 3.5 * x - 20.0;
  const Plane zq = standardize_filtered(q);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(zq.data()[i], z.data()[i], 1e-9);
}

TEST(Standardize, ConstantIsError) {
  EXPECT_EQ(error_of([] { standardize_filtered(Plane(4, 4, 1.0)); }), ErrorCode::ZeroVariance);
}

TEST(Threshold, InvertsLogNfa) {
  const double z = significance_threshold(48960, -2.0);
  EXPECT_NEAR(log_nfa(z, 48960), -2.0, 1e-9);
  EXPECT_TRUE(std::isinf(significance_threshold(10, -1e9)));
  EXPECT_EQ(significance_threshold(10, 5.0), 0.0);
}

TEST(Detect, InsertedBlockIsFound) {
  std::mt19937_64 rng(6);
  std::vector<Residual> pyr = normal_residual_pyramid(64, 4, 1, rng);
  for (int y = 20; y < 29; ++y) {
    for (int x = 30; x < 39; ++x) pyr[0].channels[0](x, y) += 10.0;
  }
  const auto dets = detect(pyr, DetectParams{});
  const bool hit = std::any_of(dets.begin(), dets.end(), [](const Detection& d) {
    return d.scale == 0 && d.radius == 3 && d.log_nfa <= -2.0 && d.x >= 30 && d.x < 39 && d.y >= 20 && d.y < 29;
  });
  EXPECT_TRUE(hit);
}

TEST(Detect, MinusInfinityThresholdIsEmpty) {
  std::mt19937_64 rng(7);
  const auto pyr = normal_residual_pyramid(32, 2, 3, rng);
  DetectParams p;
  p.log_eps = -std::numeric_limits<double>::infinity();
  EXPECT_TRUE(detect(pyr, p).empty());
}

TEST(Detect, SortedAndBelowThreshold) {
  std::mt19937_64 rng(8);
  auto pyr = normal_residual_pyramid(64, 3, 3, rng);
  pyr[1].channels[2](10, 10) += 40.0;
  DetectParams p;
  p.log_eps = 1.0;
  const auto dets = detect(pyr, p);
  ASSERT_FALSE(dets.empty());
  EXPECT_TRUE(std::is_sorted(dets.begin(), dets.end(), detection_less));
  for (const auto& d : dets) {
    EXPECT_LE(d.log_nfa, 1.0);
    EXPECT_LT(d.x, 64 >> d.scale);
    EXPECT_LT(d.y, 64 >> d.scale);
  }
}

TEST(Detect, AffineRescalingInvariant) {
  std::mt19937_64 rng(9);
  auto pyr = normal_residual_pyramid(64, 3, 3, rng);
  pyr[0].channels[0](20, 20) += 30.0;
  DetectParams p;
  p.log_eps = 2.0;
  const auto base = detect(pyr, p);
  for (auto& level : pyr) {
    for (auto& plane : level.channels) {
      for (double& v : plane.data()) v *= 7.5;
    }
  }
  const auto scaled = detect(pyr, p);
  ASSERT_EQ(base.size(), scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(std::tie(base[i].scale, base[i].channel, base[i].radius, base[i].x, base[i].y),
              std::tie(scaled[i].scale, scaled[i].channel, scaled[i].radius, scaled[i].x, scaled[i].y));
    EXPECT_NEAR(base[i].log_nfa, scaled[i].log_nfa, 1e-6);
  }
}

TEST(Detect, NegationSymmetric) {
  std::mt19937_64 rng(10);
  auto pyr = normal_residual_pyramid(64, 3, 1, rng);
  pyr[0].channels[0](40, 12) -= 25.0;
  DetectParams p;
  p.log_eps = 2.0;
  const auto base = detect(pyr, p);
  for (auto& level : pyr) {
    for (auto& plane : level.channels) {
      for (double& v : plane.data()) v = -v;
    }
  }
  const auto negated = detect(pyr, p);
  ASSERT_EQ(base.size(), negated.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(base[i].x, negated[i].x);
    EXPECT_EQ(base[i].y, negated[i].y);
    EXPECT_NEAR(base[i].log_nfa, negated[i].log_nfa, 1e-9);
  }
}

TEST(Detect, ExactlyReconstructedPlaneIsSkipped) {
  std::mt19937_64 rng(11);
  auto pyr = normal_residual_pyramid(32, 2, 1, rng);
  pyr[1].channels[0] = Plane(16, 16, 0.0);
  DetectParams p;
  p.log_eps = 10.0;
  const auto dets = detect(pyr, p);
  EXPECT_TRUE(std::none_of(dets.begin(), dets.end(), [](const Detection& d) { return d.scale == 1; }));
}

TEST(Detect, NfaCalibrationOnPureNoise) {
  // Mean count of detections with NFA <= eps over M noise frames stays within
  // eps + 3 sqrt(eps / M).
  constexpr int kFrames = 100;
  std::mt19937_64 rng(12);
  const TestBudget budget = compute_test_budget({{64, 64}, {32, 32}, {16, 16}, {8, 8}}, 3, 3);
  const std::vector<int> radii{1, 2, 3};
  std::vector<double> counts(3, 0.0);
  const double eps[3] = {0.1, 1.0, 10.0};
  for (int f = 0; f < kFrames; ++f) {
    std::vector<Detection> dets;
    for (int s = 0; s < 4; ++s) {
      for (int c = 0; c < 3; ++c) {
        detect_in_normal_plane(normal_plane(64 >> s, 64 >> s, rng), s, c, radii, budget.total, 1.0, dets);
      }
    }
    for (int e = 0; e < 3; ++e) {
      counts[e] += static_cast<double>(std::count_if(
          dets.begin(), dets.end(), [&](const Detection& d) { return d.log_nfa <= std::log10(eps[e]); }));
    }
  }
  for (int e = 0; e < 3; ++e) {
    EXPECT_LE(counts[e] / kFrames, eps[e] + 3.0 * std::sqrt(eps[e] / kFrames)) << "eps " << eps[e];
  }
}
