#pragma once

#include "slrff/types.hpp"

#include <cstdint>

namespace slrff::linalg {

// Every linear solve in the library goes through this header so that
// callers can verify which code paths invert matrices. Counts are per
// thread.
std::uint64_t solve_count();
void reset_solve_count();

/// Cholesky factorization of a symmetric positive-definite matrix.
/// Only the lower triangle of the input is read.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& spd);

  Index size() const { return llt_.rows(); }

  /// Solves A X = B. Counts as one solve.
  Matrix solve(const Matrix& rhs) const;
  Vector solve(const Vector& rhs) const;

 private:
  Eigen::LLT<Matrix> llt_;
};

/// Largest absolute eigenvalue of a symmetric matrix, i.e. its spectral
/// norm. Uses a dense eigensolver for n <= dense_cutoff and power
/// iteration otherwise.
struct SpectralNormOptions {
  double rel_tol = 1e-9;
  int max_iterations = 10000;
  Index dense_cutoff = 64;
};

double symmetric_spectral_norm(const Matrix& sym,
                               const SpectralNormOptions& opts = {});

double symmetric_spectral_norm_power(const Matrix& sym, double rel_tol,
                                     int max_iterations);

/// Eigenvalues of a symmetric matrix, sorted nonincreasing.
Vector symmetric_eigenvalues_desc(const Matrix& sym);

}  // namespace slrff::linalg
