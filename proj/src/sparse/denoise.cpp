#include "ufo/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ufo/error.hpp"
#include "ufo/filter.hpp"
#include "ufo/ksvd.hpp"

namespace ufo {

void DenoiseParams::validate(int channels) const {
  if (patch_side < 2) throw Error(ErrorCode::InvalidArgument, "patch_side must be >= 2");
  if (dict_size < 1) throw Error(ErrorCode::InvalidArgument, "dict_size must be >= 1");
  if (k_iter < 1) throw Error(ErrorCode::InvalidArgument, "k_iter must be >= 1");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  if (!(ormp_epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ormp_epsilon must be >= 0");
  if (lambda && !(*lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  if (sigma && !(*sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  const int dim = patch_side * patch_side * channels;
  if (max_atoms && (*max_atoms < 1 || *max_atoms > dim)) {
    throw Error(ErrorCode::InvalidArgument, "max_atoms must lie in [1, " + std::to_string(dim) + "]");
  }
}

int DenoiseParams::resolved_max_atoms(int channels) const {
  if (max_atoms) return *max_atoms;
  return std::max(1, patch_side * patch_side * channels / 2);
}

double estimate_noise_sigma(const ImageBuffer& img) {
  const Plane lum = luminance(img);
  const int w = lum.width();
  const int h = lum.height();
  std::vector<double> lap;
  lap.reserve(lum.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = lum(mirror_index(x - 1, w), y) + lum(mirror_index(x + 1, w), y) +
                       lum(x, mirror_index(y - 1, h)) + lum(x, mirror_index(y + 1, h)) - 4.0 * lum(x, y);
      lap.push_back(v);
    }
  }
  auto median_of = [](std::vector<double>& v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double med = *mid;
    if (v.size() % 2 == 0) med = 0.5 * (med + *std::max_element(v.begin(), mid));
    return med;
  };
  const double med = median_of(lap);
  for (double& v : lap) v = std::abs(v - med);
  const double mad = median_of(lap);
  return mad / (0.6745 * std::sqrt(20.0));
}

LearnedModel learn_dictionary(const PatchMatrix& patches, const DenoiseParams& params) {
  params.validate(patches.channels);
  const int max_atoms = params.resolved_max_atoms(patches.channels);
  const Eigen::MatrixXd& signals = patches.columns;

  LearnedModel model;
  model.dictionary = init_dictionary(patches, params.dict_size, params.rng_seed);

  Eigen::MatrixXd res;
  std::vector<double> fresh_err;
  for (int it = 0; it < params.k_iter; ++it) {
    const OrmpCoder coder(model.dictionary, params.ormp_epsilon, max_atoms);
    std::vector<SparseCode> fresh = coder.encode_all(signals, &fresh_err);
    if (it > 0 && params.keep_better_code) {
      // K-SVD leaves `res` current for the codes it updated; only the
      // replaced columns need recomputing.
      const Eigen::MatrixXd& atoms = model.dictionary.atoms();
      for (std::size_t p = 0; p < fresh.size(); ++p) {
        const auto col = static_cast<Eigen::Index>(p);
        if (res.col(col).squaredNorm() >= fresh_err[p]) {
          model.codes[p] = std::move(fresh[p]);
          res.col(col) = signals.col(col) - synthesize(atoms, model.codes[p]);
        }
      }
    } else {
      model.codes = std::move(fresh);
      res = representation_residuals(signals, model.dictionary.atoms(), model.codes);
    }
    model.dictionary = ksvd_iterate(signals, model.dictionary, model.codes, &res);
    model.objective.push_back(res.squaredNorm());
  }

  const OrmpCoder coder(model.dictionary, params.ormp_epsilon, max_atoms);
  std::vector<SparseCode> fresh = coder.encode_all(signals, &fresh_err);
  if (params.keep_better_code) {
    for (std::size_t p = 0; p < fresh.size(); ++p) {
      if (res.col(static_cast<Eigen::Index>(p)).squaredNorm() >= fresh_err[p]) model.codes[p] = std::move(fresh[p]);
    }
  } else {
    model.codes = std::move(fresh);
  }
  return model;
}

ImageBuffer reconstruct(const ImageBuffer& noisy, const PatchMatrix& patches, const Dictionary& dict,
                        const std::vector<SparseCode>& codes, double lambda) {
  if (patches.channels != noisy.channels() || dict.patch_dim() != patches.patch_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "patch geometry does not match image/dictionary");
  }
  if (static_cast<int>(codes.size()) != patches.count()) {
    throw Error(ErrorCode::DimensionMismatch, "one code per patch required");
  }
  Eigen::MatrixXd estimates(patches.patch_dim(), patches.count());
  for (int p = 0; p < patches.count(); ++p) estimates.col(p) = synthesize(dict.atoms(), codes[p]);

  PatchAccumulator acc(noisy.width(), noisy.height(), noisy.channels());
  place_patches(acc, patches.side, patches.origins, estimates);

  ImageBuffer out(noisy.width(), noisy.height(), noisy.channels());
  for (int c = 0; c < noisy.channels(); ++c) {
    auto y = noisy.channel(c);
    auto sum = acc.sums.channel(c);
    auto cnt = acc.counts.data();
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double denom = lambda + cnt[i];
      dst[i] = denom > 0.0 ? (lambda * y[i] + sum[i]) / denom : y[i];
    }
  }
  return out;
}

namespace {

DenoiseResult finish(const ImageBuffer& img, const PatchMatrix& patches, const DenoiseParams& params,
                     Dictionary dict, const std::vector<SparseCode>& codes, std::vector<double> objective,
                     double sigma) {
  DenoiseResult result;
  result.sigma = sigma;
  result.lambda = params.lambda ? *params.lambda : 30.0 / sigma;
  result.estimate = reconstruct(img, patches, dict, codes, result.lambda);
  result.reconstruction = result.estimate;
  for (double& v : result.reconstruction.data()) v = std::clamp(v, 0.0, 255.0);
  result.dictionary = std::move(dict);
  result.objective = std::move(objective);
  return result;
}

double resolve_sigma(const ImageBuffer& img, const DenoiseParams& params) {
  if (params.sigma) return *params.sigma;
  return std::max(estimate_noise_sigma(img), kMinSigma);
}

}  // namespace

DenoiseResult denoise(const ImageBuffer& img, const DenoiseParams& params) {
  params.validate(img.channels());
  const PatchMatrix patches = extract_patches(img, params.patch_side, params.stride);
  LearnedModel model = learn_dictionary(patches, params);
  return finish(img, patches, params, std::move(model.dictionary), model.codes, std::move(model.objective),
                resolve_sigma(img, params));
}

DenoiseResult denoise_with_dictionary(const ImageBuffer& img, const DenoiseParams& params, const Dictionary& dict) {
  params.validate(img.channels());
  const PatchMatrix patches = extract_patches(img, params.patch_side, params.stride);
  if (dict.patch_dim() != patches.patch_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "dictionary atom length does not match patch size");
  }
  const OrmpCoder coder(dict, params.ormp_epsilon, params.resolved_max_atoms(img.channels()));
  const auto codes = coder.encode_all(patches.columns);
  return finish(img, patches, params, dict, codes, {}, resolve_sigma(img, params));
}

Residual residual(const ImageBuffer& input, const ImageBuffer& reconstruction) {
  if (input.width() != reconstruction.width() || input.height() != reconstruction.height() ||
      input.channels() != reconstruction.channels()) {
    throw Error(ErrorCode::DimensionMismatch, "residual inputs differ in geometry");
  }
  Residual r;
  for (int c = 0; c < input.channels(); ++c) {
    Plane p(input.width(), input.height());
    auto a = input.channel(c);
    auto b = reconstruction.channel(c);
    auto dst = p.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] - b[i];
    r.channels.push_back(std::move(p));
  }
  return r;
}

}  // namespace ufo
