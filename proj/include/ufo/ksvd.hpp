#pragma once

#include <Eigen/Core>

#include <vector>

#include "ufo/dictionary.hpp"
#include "ufo/ormp.hpp"
#include "ufo/patches.hpp"

namespace ufo {

// sum_p ||y_p - D a_p||^2
double representation_error(const Eigen::MatrixXd& signals, const Eigen::MatrixXd& atoms,
                            const std::vector<SparseCode>& codes);

// Y - D A, column per signal.
Eigen::MatrixXd representation_residuals(const Eigen::MatrixXd& signals, const Eigen::MatrixXd& atoms,
                                         const std::vector<SparseCode>& codes);

// One K-SVD sweep. Atoms are visited in index order; for atom l the error
// matrix restricted to the signals whose code uses l (all other atoms'
// contributions removed) is replaced by its best rank-1 approximation, which
// yields the new unit atom and the new coefficients. An atom no code uses is
// replaced by the normalized signal with the largest current residual (ties to
// the lowest index; a signal is used at most once per sweep).
//
// `codes` keep their supports; their coefficients for each updated atom are
// rewritten in place. `residuals` (Y - D A) is kept current when given.
Dictionary ksvd_iterate(const Eigen::MatrixXd& signals, const Dictionary& dict, std::vector<SparseCode>& codes,
                        Eigen::MatrixXd* residuals = nullptr);

inline Dictionary ksvd_iterate(const PatchMatrix& patches, const Dictionary& dict, std::vector<SparseCode>& codes) {
  return ksvd_iterate(patches.columns, dict, codes);
}

}  // namespace ufo
