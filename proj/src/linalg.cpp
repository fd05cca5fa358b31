#include "slrff/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace slrff {

RngSeed derive_seed(RngSeed parent, std::uint64_t stream) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = parent.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return RngSeed{z ^ (z >> 31)};
}

namespace linalg {
namespace {
thread_local std::uint64_t g_solves = 0;
}

std::uint64_t solve_count() { return g_solves; }
void reset_solve_count() { g_solves = 0; }

SpdFactor::SpdFactor(const Matrix& spd) {
  if (spd.rows() != spd.cols()) {
    throw ShapeError("SpdFactor: matrix is not square");
  }
  if (!spd.allFinite()) {
    throw NumericalError("SpdFactor: non-finite entries");
  }
  llt_.compute(spd);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("SpdFactor: matrix is not positive definite");
  }
}

Matrix SpdFactor::solve(const Matrix& rhs) const {
  if (rhs.rows() != size()) throw ShapeError("SpdFactor::solve: row mismatch");
  ++g_solves;
  return llt_.solve(rhs);
}

Vector SpdFactor::solve(const Vector& rhs) const {
  if (rhs.size() != size()) throw ShapeError("SpdFactor::solve: size mismatch");
  ++g_solves;
  return llt_.solve(rhs);
}

double symmetric_spectral_norm_power(const Matrix& sym, double rel_tol,
                                     int max_iterations) {
  const Index n = sym.rows();
  if (n == 0) return 0.0;
  // Deterministic, non-degenerate start vector.
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  }
  v.normalize();
  double estimate = 0.0;
  Vector w(n);
  for (int it = 0; it < max_iterations; ++it) {
    w.noalias() = sym.selfadjointView<Eigen::Lower>() * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    // ||A v|| for unit v converges monotonically to the largest |eigenvalue|.
    if (it > 0 && std::abs(norm - estimate) <= rel_tol * norm) {
      return norm;
    }
    estimate = norm;
  }
  return estimate;
}

double symmetric_spectral_norm(const Matrix& sym,
                               const SpectralNormOptions& opts) {
  if (sym.rows() != sym.cols()) {
    throw ShapeError("symmetric_spectral_norm: matrix is not square");
  }
  if (sym.rows() <= opts.dense_cutoff) {
    if (sym.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return symmetric_spectral_norm_power(sym, opts.rel_tol,
                                       opts.max_iterations);
}

Vector symmetric_eigenvalues_desc(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition did not converge");
  }
  Vector ev = es.eigenvalues().reverse();
  return ev;
}

}  // namespace linalg
}  // namespace slrff
