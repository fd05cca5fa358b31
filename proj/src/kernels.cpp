#include "slrff/kernels.hpp"

#include "slrff/features.hpp"
#include "slrff/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slrff {

KernelSpec::KernelSpec(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ShapeError("KernelSpec: bandwidth must be positive and finite, got " +
                     std::to_string(sigma));
  }
}

SpectralDensity::SpectralDensity(Index dimension, double variance)
    : dimension_(dimension), variance_(variance) {
  if (dimension < 1) throw ShapeError("SpectralDensity: dimension must be >= 1");
  if (!(variance > 0.0)) throw ShapeError("SpectralDensity: variance must be > 0");
}

double SpectralDensity::stddev() const { return std::sqrt(variance_); }

double SpectralDensity::log_density(std::span<const double> w) const {
  if (static_cast<Index>(w.size()) != dimension_) {
    throw ShapeError("SpectralDensity: dimension mismatch");
  }
  double sq = 0.0;
  for (double c : w) sq += c * c;
  const double d = static_cast<double>(dimension_);
  return -0.5 * d * std::log(2.0 * std::numbers::pi * variance_) -
         0.5 * sq / variance_;
}

double SpectralDensity::density(std::span<const double> w) const {
  return std::exp(log_density(w));
}

double eval_kernel(std::span<const double> x, std::span<const double> xp,
                   const KernelSpec& spec) {
  if (x.size() != xp.size()) {
    throw ShapeError("eval_kernel: dimension mismatch");
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - xp[k];
    sq += diff * diff;
  }
  return std::exp(-sq / (spec.sigma() * spec.sigma()));
}

KernelMatrix kernel_matrix(const Matrix& data, const KernelSpec& spec) {
  const Index n = data.rows();
  if (n < 1) throw ShapeError("kernel_matrix: empty dataset");
  const Index d = data.cols();
  // Row-major copy so each point is a contiguous span.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rows = data;
  KernelMatrix k{Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    k.entries(i, i) = 1.0;
    std::span<const double> xi(rows.data() + i * d, static_cast<std::size_t>(d));
    for (Index j = 0; j < i; ++j) {
      std::span<const double> xj(rows.data() + j * d,
                                 static_cast<std::size_t>(d));
      const double v = eval_kernel(xi, xj, spec);
      k.entries(i, j) = v;
      k.entries(j, i) = v;
    }
  }
  return k;
}

SpectralDensity spectral_density(const KernelSpec& spec, Index dimension) {
  return SpectralDensity(dimension, 2.0 / (spec.sigma() * spec.sigma()));
}

double relative_approx_error(const KernelMatrix& kernel,
                             const FeatureMatrix& features) {
  if (features.entries.rows() != kernel.size()) {
    throw ShapeError("relative_approx_error: feature rows do not match kernel");
  }
  const double k_norm = linalg::symmetric_spectral_norm(kernel.entries);
  if (k_norm == 0.0) throw NumericalError("relative_approx_error: zero kernel");
  Matrix residual = kernel.entries;
  residual.selfadjointView<Eigen::Lower>().rankUpdate(features.entries, -1.0);
  return linalg::symmetric_spectral_norm(residual) / k_norm;
}

}  // namespace slrff
