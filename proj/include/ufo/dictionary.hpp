#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>

#include "ufo/patches.hpp"

namespace ufo {

inline constexpr double kUnitNormTolerance = 1e-9;

// patch_dim x atom_count matrix with unit-norm columns.
class Dictionary {
 public:
  Dictionary() = default;
  // Throws NotNormalized unless every column has unit norm within 1e-9.
  explicit Dictionary(Eigen::MatrixXd atoms);

  // Normalizes each column; throws NotNormalized for a near-zero column.
  static Dictionary from_unnormalized(Eigen::MatrixXd atoms);

  int patch_dim() const noexcept { return static_cast<int>(atoms_.rows()); }
  int atom_count() const noexcept { return static_cast<int>(atoms_.cols()); }
  const Eigen::MatrixXd& atoms() const noexcept { return atoms_; }
  auto atom(int l) const { return atoms_.col(l); }

  // `unit` must already be normalized.
  void set_atom(int l, const Eigen::Ref<const Eigen::VectorXd>& unit);

  // Plain-text dump: a "n k" header line, then n rows of k values.
  void write_text(std::ostream& os) const;
  static Dictionary read_text(std::istream& is);

 private:
  Eigen::MatrixXd atoms_;
};

// Throws NotNormalized naming the first column off the unit sphere.
void check_unit_columns(const Eigen::MatrixXd& atoms);

// k patch columns drawn uniformly without replacement; near-zero patches
// (norm < 1e-12) are skipped and another one is drawn.
Dictionary init_dictionary(const PatchMatrix& patches, int k, std::uint64_t seed);

}  // namespace ufo
