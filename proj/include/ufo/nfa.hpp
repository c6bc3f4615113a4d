#pragma once

#include <cstdint>
#include <vector>

#include "ufo/pyramid.hpp"

namespace ufo {

// Natural log of erfc(x); finite for all x >= 0 where erfc itself underflows.
double log_erfc(double x);

// log10(N * P(|X| >= |value|)) for X ~ N(0, 1): the two-sided tail under the
// naive model, scaled by the number of tests.
double log_nfa(double value, std::uint64_t n_tests);

// Number of tests of one frame: kernels x channels x pixels summed over scales.
struct TestBudget {
  int n_kernels = 0;
  int n_channels = 0;
  std::vector<std::uint64_t> pixel_counts;  // |Omega_s| per scale
  std::uint64_t total = 0;
};

TestBudget compute_test_budget(const std::vector<std::pair<int, int>>& level_sizes, int n_kernels, int n_channels);
TestBudget compute_test_budget(const Pyramid& pyramid, int n_kernels, int n_channels);

}  // namespace ufo
