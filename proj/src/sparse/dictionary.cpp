#include "ufo/dictionary.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ufo/error.hpp"
#include "ufo/random.hpp"

namespace ufo {

namespace {
constexpr double kMinPatchNorm = 1e-12;
}

void check_unit_columns(const Eigen::MatrixXd& atoms) {
  if (atoms.cols() == 0 || atoms.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "dictionary must have at least one atom");
  }
  for (Eigen::Index l = 0; l < atoms.cols(); ++l) {
    const double norm = atoms.col(l).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitNormTolerance) {
      throw Error(ErrorCode::NotNormalized,
                  "atom " + std::to_string(l) + " has norm " + std::to_string(norm));
    }
  }
}

Dictionary::Dictionary(Eigen::MatrixXd atoms) : atoms_(std::move(atoms)) { check_unit_columns(atoms_); }

Dictionary Dictionary::from_unnormalized(Eigen::MatrixXd atoms) {
  for (Eigen::Index l = 0; l < atoms.cols(); ++l) {
    const double norm = atoms.col(l).norm();
    if (!(norm >= kMinPatchNorm)) {
      throw Error(ErrorCode::NotNormalized, "atom " + std::to_string(l) + " is (near) zero");
    }
    atoms.col(l) /= norm;
  }
  return Dictionary(std::move(atoms));
}

void Dictionary::set_atom(int l, const Eigen::Ref<const Eigen::VectorXd>& unit) {
  if (unit.size() != atoms_.rows()) throw Error(ErrorCode::DimensionMismatch, "atom length mismatch");
  if (std::abs(unit.norm() - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorCode::NotNormalized, "replacement atom " + std::to_string(l) + " is not unit norm");
  }
  atoms_.col(l) = unit;
}

void Dictionary::write_text(std::ostream& os) const {
  os << atoms_.rows() << ' ' << atoms_.cols() << '\n';
  os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < atoms_.rows(); ++i) {
    for (Eigen::Index l = 0; l < atoms_.cols(); ++l) {
      if (l) os << ' ';
      os << atoms_(i, l);
    }
    os << '\n';
  }
}

Dictionary Dictionary::read_text(std::istream& is) {
  Eigen::Index n = 0, k = 0;
  if (!(is >> n >> k) || n <= 0 || k <= 0) throw Error(ErrorCode::DecodeError, "bad dictionary header");
  Eigen::MatrixXd atoms(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < k; ++l) {
      if (!(is >> atoms(i, l))) throw Error(ErrorCode::DecodeError, "truncated dictionary body");
    }
  }
  return Dictionary(std::move(atoms));
}

Dictionary init_dictionary(const PatchMatrix& patches, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "dictionary size must be >= 1");
  const int count = patches.count();
  if (count < k) {
    throw Error(ErrorCode::InsufficientPatches, "need at least " + std::to_string(k) + " patches, have " +
                                                    std::to_string(count));
  }

  // Partial Fisher-Yates: position i receives a uniform draw from the
  // not-yet-chosen tail; unusable draws are discarded and the tail shrinks.
  std::vector<int> pool(count);
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  Eigen::MatrixXd atoms(patches.patch_dim(), k);
  int filled = 0;
  std::size_t remaining = pool.size();
  while (filled < k && remaining > 0) {
    const std::size_t pick = uniform_index(rng, remaining);
    const int idx = pool[pick];
    pool[pick] = pool[remaining - 1];
    --remaining;
    const double norm = patches.columns.col(idx).norm();
    if (norm < kMinPatchNorm) continue;
    atoms.col(filled++) = patches.columns.col(idx) / norm;
  }
  if (filled < k) {
    throw Error(ErrorCode::InsufficientPatches,
                "only " + std::to_string(filled) + " usable (non-zero) patches for " + std::to_string(k) + " atoms");
  }
  return Dictionary(std::move(atoms));
}

}  // namespace ufo
