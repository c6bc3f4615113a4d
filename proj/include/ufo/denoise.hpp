#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ufo/dictionary.hpp"
#include "ufo/image.hpp"
#include "ufo/ormp.hpp"
#include "ufo/patches.hpp"

namespace ufo {

struct DenoiseParams {
  int patch_side = 4;
  int dict_size = 64;
  double ormp_epsilon = 1e-6;
  int k_iter = 7;
  std::optional<double> lambda;    // default 30 / sigma
  std::optional<double> sigma;     // estimated from the image when absent
  std::optional<int> max_atoms;    // default patch_dim / 2
  std::uint64_t rng_seed = 0;
  int stride = 1;
  // After re-coding, a signal keeps its previous code when that code
  // represents it better under the updated dictionary.
  bool keep_better_code = true;

  // Throws InvalidArgument on out-of-range fields.
  void validate(int channels) const;
  int resolved_max_atoms(int channels) const;
};

// Floor applied to estimated noise levels before forming 30 / sigma.
inline constexpr double kMinSigma = 1e-3;

// Robust noise level: MAD of the 5-point Laplacian of the luminance divided by
// 0.6745 * sqrt(20). Mirror borders.
double estimate_noise_sigma(const ImageBuffer& img);

struct LearnedModel {
  Dictionary dictionary;
  std::vector<SparseCode> codes;
  // Representation error after each K-SVD sweep.
  std::vector<double> objective;
};

// init_dictionary, then k_iter rounds of {ORMP on all patches; K-SVD sweep},
// then one final ORMP pass against the last dictionary.
LearnedModel learn_dictionary(const PatchMatrix& patches, const DenoiseParams& params);

// Closed-form minimiser of lambda ||x - y||^2 + sum_p ||R_p x - D a_p||^2:
// x(p) = (lambda y(p) + sum of covering patch estimates) / (lambda + coverage).
ImageBuffer reconstruct(const ImageBuffer& noisy, const PatchMatrix& patches, const Dictionary& dict,
                        const std::vector<SparseCode>& codes, double lambda);

struct DenoiseResult {
  ImageBuffer estimate;        // unclamped closed-form result, used for the residual
  ImageBuffer reconstruction;  // estimate clamped to [0, 255]
  Dictionary dictionary;
  double sigma = 0.0;
  double lambda = 0.0;
  std::vector<double> objective;
};

DenoiseResult denoise(const ImageBuffer& img, const DenoiseParams& params);

// Skips learning: codes the patches against `dict` and reconstructs.
DenoiseResult denoise_with_dictionary(const ImageBuffer& img, const DenoiseParams& params, const Dictionary& dict);

// Per-channel y - x_hat, signed and unclamped.
struct Residual {
  std::vector<Plane> channels;

  int width() const { return channels.empty() ? 0 : channels.front().width(); }
  int height() const { return channels.empty() ? 0 : channels.front().height(); }
};

Residual residual(const ImageBuffer& input, const ImageBuffer& reconstruction);

}  // namespace ufo
