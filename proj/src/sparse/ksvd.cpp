#include "ufo/ksvd.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "ufo/error.hpp"
#include "ufo/parallel.hpp"

namespace ufo {

namespace {

constexpr double kMinReplacementNorm = 1e-12;
constexpr std::size_t kScatterBlock = 1024;

struct Usage {
  int signal;
  double* value;  // the signal's coefficient on this atom
};

// Atoms with at least this many users accumulate each block's scatter in
// single precision (three times the throughput); block sums are kept in
// double. The eigenvector error this introduces is far below the accuracy
// that matters for dictionary learning on images.
constexpr std::size_t kSinglePrecisionUsers = 8192;

// Accumulates S = sum e e^T over columns e = r_p + c_p d fed one at a time,
// batching them into cache-sized blocks for the rank update.
class ScatterAccumulator {
 public:
  explicit ScatterAccumulator(int n)
      : block_(n, static_cast<Eigen::Index>(kScatterBlock)),
        single_cols_(n, static_cast<Eigen::Index>(kScatterBlock)),
        scatter_(n, n),
        single_block_(n, n) {}

  void reset(std::size_t columns) {
    scatter_.setZero();
    fill_ = 0;
    single_ = columns >= kSinglePrecisionUsers;
  }
  template <typename Column>
  void add(const Column& e) {
    if (single_) {
      single_cols_.col(fill_++) = e.template cast<float>();
    } else {
      block_.col(fill_++) = e;
    }
    if (fill_ == block_.cols()) flush();
  }
  const Eigen::MatrixXd& finish() {
    flush();
    return scatter_;
  }

 private:
  void flush() {
    if (fill_ == 0) return;
    if (single_) {
      const auto cols = single_cols_.leftCols(fill_);
      single_block_.noalias() = cols * cols.transpose();
      scatter_ += single_block_.cast<double>();
    } else {
      scatter_.selfadjointView<Eigen::Lower>().rankUpdate(block_.leftCols(fill_));
    }
    fill_ = 0;
  }

  Eigen::MatrixXd block_;
  Eigen::MatrixXf single_cols_;
  Eigen::MatrixXd scatter_;
  Eigen::MatrixXf single_block_;
  Eigen::Index fill_ = 0;
  bool single_ = false;
};

void check_codes(const Eigen::MatrixXd& signals, const Eigen::MatrixXd& atoms,
                 const std::vector<SparseCode>& codes) {
  if (signals.rows() != atoms.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length " + std::to_string(signals.rows()) +
                                                  " does not match atom length " + std::to_string(atoms.rows()));
  }
  if (static_cast<Eigen::Index>(codes.size()) != signals.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(codes.size()) + " codes for " +
                                                  std::to_string(signals.cols()) + " signals");
  }
  for (const auto& code : codes) {
    if (code.indices.size() != code.values.size()) {
      throw Error(ErrorCode::DimensionMismatch, "code index/value length mismatch");
    }
    for (int idx : code.indices) {
      if (idx < 0 || idx >= atoms.cols()) throw Error(ErrorCode::OutOfBounds, "code references a missing atom");
    }
  }
}

}  // namespace

Eigen::MatrixXd representation_residuals(const Eigen::MatrixXd& signals, const Eigen::MatrixXd& atoms,
                                         const std::vector<SparseCode>& codes) {
  check_codes(signals, atoms, codes);
  Eigen::MatrixXd res = signals;
  constexpr Eigen::Index kColumns = 4096;
  const Eigen::Index count = signals.cols();
  parallel_for(static_cast<std::size_t>((count + kColumns - 1) / kColumns), [&](std::size_t b) {
    const Eigen::Index end = std::min(count, static_cast<Eigen::Index>(b + 1) * kColumns);
    for (Eigen::Index p = static_cast<Eigen::Index>(b) * kColumns; p < end; ++p) {
      const auto& code = codes[p];
      for (std::size_t i = 0; i < code.size(); ++i) res.col(p).noalias() -= code.values[i] * atoms.col(code.indices[i]);
    }
  });
  return res;
}

double representation_error(const Eigen::MatrixXd& signals, const Eigen::MatrixXd& atoms,
                            const std::vector<SparseCode>& codes) {
  return representation_residuals(signals, atoms, codes).squaredNorm();
}

Dictionary ksvd_iterate(const Eigen::MatrixXd& signals, const Dictionary& dict, std::vector<SparseCode>& codes,
                        Eigen::MatrixXd* residuals) {
  const Eigen::MatrixXd& current = dict.atoms();
  check_codes(signals, current, codes);
  const int n = dict.patch_dim();
  const int k = dict.atom_count();
  const Eigen::Index count = signals.cols();

  Eigen::MatrixXd local;
  if (residuals) {
    if (residuals->rows() != signals.rows() || residuals->cols() != count) {
      throw Error(ErrorCode::DimensionMismatch, "residual matrix geometry mismatch");
    }
  } else {
    local = representation_residuals(signals, current, codes);
    residuals = &local;
  }
  Eigen::MatrixXd& res = *residuals;

  // Users of each atom in ascending signal order.
  std::vector<std::vector<Usage>> users(k);
  for (Eigen::Index p = 0; p < count; ++p) {
    auto& code = codes[p];
    for (std::size_t i = 0; i < code.size(); ++i) {
      users[code.indices[i]].push_back({static_cast<int>(p), &code.values[i]});
    }
  }

  Eigen::MatrixXd atoms = current;
  std::vector<char> donated(count, 0);
  ScatterAccumulator acc(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(n);

  auto accumulate = [&](const Usage& us, const Eigen::VectorXd& d) {
    acc.add(res.col(us.signal) + *us.value * d);
  };

  // True when `acc` already holds the scatter of atom l's restricted error,
  // built during the previous atom's residual pass.
  bool ready = false;
  for (int l = 0; l < k; ++l) {
    const auto& use = users[l];
    if (use.empty()) {
      // Worst-represented signal that can be normalized and has not yet
      // donated an atom during this sweep.
      int worst = -1;
      double worst_err = -1.0;
      for (Eigen::Index p = 0; p < count; ++p) {
        if (donated[p]) continue;
        const double e = res.col(p).squaredNorm();
        if (e > worst_err && signals.col(p).norm() >= kMinReplacementNorm) {
          worst_err = e;
          worst = static_cast<int>(p);
        }
      }
      if (worst >= 0) {
        donated[worst] = 1;
        atoms.col(l) = signals.col(worst) / signals.col(worst).norm();
      }
      ready = false;
      continue;
    }

    // Scatter E E^T of the restricted error matrix E = R_use + d_l c^T.
    const Eigen::VectorXd d = atoms.col(l);
    if (!ready) {
      acc.reset(use.size());
      for (const Usage& us : use) accumulate(us, d);
    }
    eig.compute(acc.finish());
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigensolver failed in K-SVD update");

    // Dominant left singular vector of E = top eigenvector of E E^T.
    Eigen::VectorXd u = eig.eigenvectors().col(n - 1);
    if (!(eig.eigenvalues()(n - 1) > 0.0)) {
      u = d;  // E == 0: any unit atom is optimal, keep the old one
    }
    u.normalize();
    if (u.dot(d) < 0.0) u = -u;

    // Residual pass: v = E^T u becomes the coefficients and each residual
    // column E - u v^T. The same sweep over the signals gathers the next
    // atom's scatter, which sees the residuals already updated for atom l.
    const bool chain = l + 1 < k && !users[l + 1].empty();
    const auto& next_use = chain ? users[l + 1] : users[l];
    const Eigen::VectorXd next_d = chain ? Eigen::VectorXd(atoms.col(l + 1)) : Eigen::VectorXd();
    if (chain) acc.reset(next_use.size());
    auto it = next_use.begin();
    for (const Usage& us : use) {
      if (chain) {
        for (; it != next_use.end() && it->signal < us.signal; ++it) accumulate(*it, next_d);
      }
      auto r = res.col(us.signal);
      r.noalias() += *us.value * d;
      const double v = r.dot(u);
      r.noalias() -= v * u;
      *us.value = v;
      if (chain && it != next_use.end() && it->signal == us.signal) accumulate(*it++, next_d);
    }
    if (chain) {
      for (; it != next_use.end(); ++it) accumulate(*it, next_d);
    }
    atoms.col(l) = u;
    ready = chain;
  }
  return Dictionary(std::move(atoms));
}

}  // namespace ufo
