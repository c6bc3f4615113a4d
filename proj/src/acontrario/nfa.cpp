#include "ufo/nfa.hpp"

#include <cmath>
#include <numbers>

#include "ufo/error.hpp"

namespace ufo {

namespace {

// erfc(x) = exp(-x^2) / sqrt(pi) * K(x), K the continued fraction
// 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...)))), evaluated with modified Lentz.
double log_erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int i = 1; i < 500; ++i) {
    const double a = 0.5 * i;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return -x * x - 0.5 * std::log(std::numbers::pi) - std::log(f);
}

}  // namespace

double log_erfc(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::NonFinite, "log_erfc of NaN");
  if (x < 5.0) return std::log(std::erfc(x));
  return log_erfc_continued_fraction(x);
}

double log_nfa(double value, std::uint64_t n_tests) {
  if (std::isnan(value)) throw Error(ErrorCode::NonFinite, "log_nfa of NaN");
  if (n_tests < 1) throw Error(ErrorCode::InvalidArgument, "number of tests must be >= 1");
  const double x = std::abs(value) / std::numbers::sqrt2;
  return std::log10(static_cast<double>(n_tests)) + log_erfc(x) / std::numbers::ln10;
}

TestBudget compute_test_budget(const std::vector<std::pair<int, int>>& level_sizes, int n_kernels, int n_channels) {
  if (n_kernels < 1 || n_channels < 1) throw Error(ErrorCode::InvalidArgument, "kernel and channel counts must be >= 1");
  TestBudget b;
  b.n_kernels = n_kernels;
  b.n_channels = n_channels;
  std::uint64_t pixels = 0;
  for (const auto& [w, h] : level_sizes) {
    const std::uint64_t omega = static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h);
    b.pixel_counts.push_back(omega);
    pixels += omega;
  }
  b.total = static_cast<std::uint64_t>(n_kernels) * static_cast<std::uint64_t>(n_channels) * pixels;
  return b;
}

TestBudget compute_test_budget(const Pyramid& pyramid, int n_kernels, int n_channels) {
  if (pyramid.levels.empty()) throw Error(ErrorCode::InvalidArgument, "empty pyramid");
  std::vector<std::pair<int, int>> sizes;
  for (const auto& level : pyramid.levels) sizes.emplace_back(level.width(), level.height());
  return compute_test_budget(sizes, n_kernels, n_channels);
}

}  // namespace ufo
