#include "ufo/ormp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "ufo/error.hpp"
#include "ufo/parallel.hpp"

namespace ufo {

namespace {

// Squared norm of an atom's component outside the current support below
// which the atom counts as linearly dependent.
constexpr double kIndependenceFloor = 1e-10;

// Tracked residual energy ||x||^2 - sum a_t^2 loses absolute accuracy of
// order eps * ||x||^2; near the stopping threshold the residual is
// recomputed explicitly.
constexpr double kVerifySlack = 1e-9;

constexpr Eigen::Index kBlock = 2048;

// Per-atom state is processed in chunks of kChunk atoms, kGroup chunks at a
// time so that several independent accumulation chains are in flight.
constexpr int kChunk = 8;
constexpr int kGroup = 8;

// Running argmax of corr^2 / nu over atoms with nu above the floor, first
// index on ties. Quotients are compared cross-multiplied, each lane tracking
// the atoms congruent to it mod kChunk.
using Vec = double __attribute__((vector_size(kChunk * sizeof(double))));

inline Vec load(const double* p) {
  Vec v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

inline void store(double* p, const Vec& v) { std::memcpy(p, &v, sizeof(v)); }

class AtomSelector {
 public:
  // `exclude` is never selected.
  explicit AtomSelector(int exclude) : exclude_(exclude) {}

  void consider(const double* corr, const double* nu, int j0) {
    Vec idx;
    for (int l = 0; l < kChunk; ++l) idx[l] = j0 + l;
    const Vec c = load(corr + j0);
    const Vec n = load(nu + j0);
    const Vec c2 = c * c;
    const auto better = (n > kIndependenceFloor) & (idx != exclude_) & (c2 * nu_ > c2_ * n);
    c2_ = better ? c2 : c2_;
    nu_ = better ? n : nu_;
    idx_ = better ? idx : idx_;
  }

  // -1 if no atom qualified.
  int best() const {
    int best = -1;
    double c2 = 0.0;
    double n = 1.0;
    for (int l = 0; l < kChunk; ++l) {
      if (idx_[l] < 0.0) continue;
      const double lhs = c2_[l] * n;
      const double rhs = c2 * nu_[l];
      if (best < 0 || lhs > rhs || (lhs == rhs && idx_[l] < best)) {
        best = static_cast<int>(idx_[l]);
        c2 = c2_[l];
        n = nu_[l];
      }
    }
    return best;
  }

 private:
  Vec c2_ = Vec{};
  Vec nu_ = Vec{} + 1.0;
  Vec idx_ = Vec{} - 1.0;
  double exclude_;
};

// v_j = (G(best, j) - sum_{u<t} <q_u, d_best> <q_u, d_j>) / s for the atoms
// j0 .. j0 + C * kChunk, then the correlation and norm downdates. The updated
// atoms are offered to `next`, which picks the following atom.
template <int C>
inline void update_chunks(const double* gram_col, const double* proj, int stride, const double* along, int t,
                          double inv_s, double a, double* out, double* corr, double* nu, int j0,
                          AtomSelector& next) {
  Vec acc[C];
  for (int c = 0; c < C; ++c) acc[c] = load(gram_col + j0 + c * kChunk);
  for (int u = 0; u < t; ++u) {
    const double b = along[u];
    const double* row = proj + static_cast<std::size_t>(u) * stride + j0;
    for (int c = 0; c < C; ++c) acc[c] -= b * load(row + c * kChunk);
  }
  for (int c = 0; c < C; ++c) {
    const int j = j0 + c * kChunk;
    const Vec v = acc[c] * inv_s;
    store(out + j, v);
    store(corr + j, load(corr + j) - a * v);
    store(nu + j, load(nu + j) - v * v);
    next.consider(corr, nu, j);
  }
}

}  // namespace

struct OrmpCoder::Workspace {
  std::vector<double> corr;   // <r, d_j>
  std::vector<double> nu;     // ||P_perp d_j||^2
  std::vector<double> proj;   // [t][j] <q_t, d_j>, q_t the orthonormalized support
  std::vector<double> along;  // [u] <q_u, d_best> for u < t
  std::vector<double> diag;   // [t] <q_t, d_sel[t]>
  std::vector<double> amp;    // [t] <x, q_t>

  Workspace(int padded, int max_atoms)
      : corr(padded),
        nu(padded),
        proj(static_cast<std::size_t>(max_atoms) * padded),
        along(max_atoms),
        diag(max_atoms),
        amp(max_atoms) {}
};

Eigen::VectorXd synthesize(const Eigen::MatrixXd& atoms, const SparseCode& code) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(atoms.rows());
  for (std::size_t i = 0; i < code.size(); ++i) out.noalias() += code.values[i] * atoms.col(code.indices[i]);
  return out;
}

OrmpCoder::OrmpCoder(const Eigen::MatrixXd& atoms, double epsilon, int max_atoms)
    : atoms_(atoms), epsilon_(epsilon), max_atoms_(max_atoms) {
  check_unit_columns(atoms);
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ORMP epsilon must be >= 0");
  if (max_atoms < 1) throw Error(ErrorCode::InvalidArgument, "ORMP max_atoms must be >= 1");
  const int k = static_cast<int>(atoms.cols());
  max_atoms_ = std::min(max_atoms, k);
  padded_ = (k + kChunk - 1) / kChunk * kChunk;
  gram_ = Eigen::MatrixXd::Zero(padded_, padded_);
  gram_.topLeftCorner(k, k).noalias() = atoms.transpose() * atoms;
}

double OrmpCoder::encode(const Eigen::Ref<const Eigen::VectorXd>& x, SparseCode& out) const {
  if (x.size() != atoms_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length " + std::to_string(x.size()) +
                                                  " does not match atom length " + std::to_string(atoms_.rows()));
  }
  Workspace ws(padded_, max_atoms_);
  const Eigen::MatrixXd dtx = atoms_.transpose().lazyProduct(x);
  return encode_one(x, dtx.data(), out, ws);
}

std::vector<SparseCode> OrmpCoder::encode_all(const Eigen::MatrixXd& signals,
                                              std::vector<double>* residual_sq) const {
  if (signals.rows() != atoms_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length does not match atom length");
  }
  const Eigen::Index count = signals.cols();
  std::vector<SparseCode> codes(count);
  std::vector<double> r2(count, 0.0);
  const auto blocks = static_cast<std::size_t>((count + kBlock - 1) / kBlock);
  parallel_for(blocks, [&](std::size_t b) {
    const Eigen::Index start = static_cast<Eigen::Index>(b) * kBlock;
    const Eigen::Index len = std::min(kBlock, count - start);
    Workspace ws(padded_, max_atoms_);
    // Coefficient-wise product: each column's correlations are rounded the
    // same way whatever the block size, so encode() matches encode_all().
    const Eigen::MatrixXd dtx = atoms_.transpose().lazyProduct(signals.middleCols(start, len));
    for (Eigen::Index i = 0; i < len; ++i) {
      r2[start + i] = encode_one(signals.col(start + i), dtx.col(i).data(), codes[start + i], ws);
    }
  });
  if (residual_sq) *residual_sq = std::move(r2);
  return codes;
}

double OrmpCoder::encode_one(const Eigen::Ref<const Eigen::VectorXd>& x, const double* dtx, SparseCode& out,
                             Workspace& ws) const {
  const int k = static_cast<int>(atoms_.cols());
  const int kp = padded_;
  const double eps2 = epsilon_ * epsilon_;

  out.clear();
  out.indices.reserve(max_atoms_);
  const double energy = x.squaredNorm();
  if (!std::isfinite(energy)) throw Error(ErrorCode::NonFinite, "ORMP input contains a non-finite value");
  double r2 = energy;
  if (r2 <= eps2) return r2;

  double* corr = ws.corr.data();
  double* nu = ws.nu.data();
  double* proj = ws.proj.data();
  for (int j = 0; j < kp; ++j) {
    corr[j] = j < k ? dtx[j] : 0.0;
    nu[j] = j < k ? 1.0 : 0.0;
  }

  // D_S = Q R with R(u, t) = <q_u, d_{sel[t]}> upper triangular, so the
  // least-squares coefficients solve R c = amp by back substitution.
  auto coefficients = [&](int support) {
    out.values.resize(support);
    for (int m = support - 1; m >= 0; --m) {
      double acc = ws.amp[m];
      for (int t = m + 1; t < support; ++t) {
        acc -= proj[static_cast<std::size_t>(m) * kp + out.indices[t]] * out.values[t];
      }
      out.values[m] = acc / ws.diag[m];
    }
  };

  AtomSelector first(-1);
  for (int j0 = 0; j0 < kp; j0 += kChunk) first.consider(corr, nu, j0);
  int best = first.best();
  for (int t = 0; t < max_atoms_; ++t) {
    if (best < 0) {
      // Residual orthogonal to every independent atom.
      coefficients(t);
      return r2;
    }

    const double s = std::sqrt(nu[best]);
    const double a = corr[best] / s;
    ws.diag[t] = s;
    ws.amp[t] = a;
    out.indices.push_back(best);

    for (int u = 0; u < t; ++u) ws.along[u] = proj[static_cast<std::size_t>(u) * kp + best];
    const double* gram_col = gram_.col(best).data();
    double* row = proj + static_cast<std::size_t>(t) * kp;
    const double inv_s = 1.0 / s;
    AtomSelector next(best);
    int j0 = 0;
    for (; j0 + kGroup * kChunk <= kp; j0 += kGroup * kChunk) {
      update_chunks<kGroup>(gram_col, proj, kp, ws.along.data(), t, inv_s, a, row, corr, nu, j0, next);
    }
    for (; j0 < kp; j0 += kChunk) {
      update_chunks<1>(gram_col, proj, kp, ws.along.data(), t, inv_s, a, row, corr, nu, j0, next);
    }
    nu[best] = 0.0;
    corr[best] = 0.0;

    r2 = std::max(r2 - a * a, 0.0);
    if (r2 <= eps2 + kVerifySlack * energy) {
      coefficients(t + 1);
      r2 = (x - synthesize(atoms_, out)).squaredNorm();
      if (r2 <= eps2) return r2;
    }
    best = next.best();
  }
  coefficients(max_atoms_);
  return r2;
}

SparseCode ormp(const Eigen::MatrixXd& atoms, const Eigen::Ref<const Eigen::VectorXd>& patch, double epsilon,
                int max_atoms) {
  const OrmpCoder coder(atoms, epsilon, max_atoms);
  SparseCode code;
  coder.encode(patch, code);
  return code;
}

SparseCode ormp(const Dictionary& dict, const Eigen::Ref<const Eigen::VectorXd>& patch, double epsilon,
                int max_atoms) {
  return ormp(dict.atoms(), patch, epsilon, max_atoms);
}

}  // namespace ufo
