#pragma once

#include "slrff/types.hpp"

#include <span>

namespace slrff {

/// Gaussian kernel k(x, x') = exp(-||x - x'||^2 / sigma^2).
class KernelSpec {
 public:
  explicit KernelSpec(double sigma = 1.0);

  double sigma() const { return sigma_; }

 private:
  double sigma_;
};

/// Dense n x n kernel matrix. Symmetric with unit diagonal.
struct KernelMatrix {
  Matrix entries;

  Index size() const { return entries.rows(); }
};

/// Spectral measure of the Gaussian kernel: a zero-mean isotropic normal
/// with per-coordinate variance 2 / sigma^2.
class SpectralDensity {
 public:
  SpectralDensity(Index dimension, double variance);

  Index dimension() const { return dimension_; }
  double variance() const { return variance_; }
  double stddev() const;

  /// p(w).
  double density(std::span<const double> w) const;
  double log_density(std::span<const double> w) const;

 private:
  Index dimension_;
  double variance_;
};

double eval_kernel(std::span<const double> x, std::span<const double> xp,
                   const KernelSpec& spec);

/// Rows of `data` are points.
KernelMatrix kernel_matrix(const Matrix& data, const KernelSpec& spec);

SpectralDensity spectral_density(const KernelSpec& spec, Index dimension);

struct FeatureMatrix;

/// ||K - Z Z^T||_2 / ||K||_2 with spectral norms.
double relative_approx_error(const KernelMatrix& kernel,
                             const FeatureMatrix& features);

}  // namespace slrff
