#pragma once

#include <Eigen/Core>

#include <vector>

#include "ufo/dictionary.hpp"
#include "ufo/patches.hpp"

namespace ufo {

// Support and coefficients of one sparse approximation. Indices appear in
// selection order and are distinct.
struct SparseCode {
  std::vector<int> indices;
  std::vector<double> values;

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
  void clear() noexcept {
    indices.clear();
    values.clear();
  }
};

// D * code for a single code.
Eigen::VectorXd synthesize(const Eigen::MatrixXd& atoms, const SparseCode& code);

// Orthogonal recursive matching pursuit (order-recursive / optimized OMP).
// Each step adds the atom whose component orthogonal to the current support
// best explains the residual, i.e. argmax_j <r, d_j>^2 / ||P_perp d_j||^2, ties to
// the lowest index. Coefficients are the least-squares fit on the support.
// Stops once ||x - D a||^2 <= epsilon^2, after max_atoms atoms, or when no
// remaining atom is linearly independent of the support.
//
// The coder caches the Gram matrix, so build one per dictionary and reuse it.
class OrmpCoder {
 public:
  // Throws NotNormalized if a column is off the unit sphere.
  OrmpCoder(const Eigen::MatrixXd& atoms, double epsilon, int max_atoms);
  OrmpCoder(const Dictionary& dict, double epsilon, int max_atoms)
      : OrmpCoder(dict.atoms(), epsilon, max_atoms) {}

  // Returns the squared residual norm of the code written to `out`.
  double encode(const Eigen::Ref<const Eigen::VectorXd>& x, SparseCode& out) const;

  // Codes every column; `residual_sq`, if given, receives each squared residual.
  std::vector<SparseCode> encode_all(const Eigen::MatrixXd& signals,
                                     std::vector<double>* residual_sq = nullptr) const;

  double epsilon() const noexcept { return epsilon_; }
  int max_atoms() const noexcept { return max_atoms_; }

 private:
  struct Workspace;
  // Codes x given its correlations D^T x; returns the squared residual.
  double encode_one(const Eigen::Ref<const Eigen::VectorXd>& x, const double* dtx, SparseCode& out,
                    Workspace& ws) const;

  const Eigen::MatrixXd& atoms_;
  // Gram matrix with rows and columns zero-padded to a multiple of 8.
  Eigen::MatrixXd gram_;
  int padded_ = 0;
  double epsilon_;
  int max_atoms_;
};

SparseCode ormp(const Dictionary& dict, const Eigen::Ref<const Eigen::VectorXd>& patch, double epsilon,
                int max_atoms);
SparseCode ormp(const Eigen::MatrixXd& atoms, const Eigen::Ref<const Eigen::VectorXd>& patch, double epsilon,
                int max_atoms);

}  // namespace ufo
