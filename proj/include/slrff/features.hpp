#pragma once

#include "slrff/kernels.hpp"
#include "slrff/types.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace slrff {

enum class FrequencySource { MonteCarlo, QMC, LeverageResampled, SurrogateResampled };

std::string_view to_string(FrequencySource source);

/// A set of frequencies w_i (rows) with importance ratios p(w_i)/q(w_i).
struct FrequencyPool {
  Matrix frequencies;  // l x d
  Vector weights;      // l, all 1 for data-independent sources
  FrequencySource source = FrequencySource::MonteCarlo;

  Index size() const { return frequencies.rows(); }
  Index dimension() const { return frequencies.cols(); }

  /// Throws ShapeError unless weights are finite, nonnegative and sized to
  /// the frequencies.
  void validate() const;
};

/// Real realization of the random feature map. Column pair (2i, 2i+1)
/// holds sqrt(r_i/s) cos(w_i^T x) and sqrt(r_i/s) sin(w_i^T x).
struct FeatureMatrix {
  Matrix entries;  // n x 2s
  Index frequency_count = 0;

  Index rows() const { return entries.rows(); }
  auto cos_column(Index i) const { return entries.col(2 * i); }
  auto sin_column(Index i) const { return entries.col(2 * i + 1); }
};

FrequencyPool sample_mc(const SpectralDensity& density, Index count, RngSeed seed);

/// Largest dimension supported by the Halton prime-base table.
inline constexpr Index kMaxHaltonDimension = 64;

/// Radical inverse of `index` in `base` (van der Corput).
double halton_radical_inverse(std::uint64_t index, unsigned base);

/// The first `dimension` primes.
std::span<const unsigned> halton_bases(Index dimension);

/// Quantile of the standard normal. Inputs are clamped to
/// [1e-12, 1 - 1e-12].
double inverse_normal_cdf(double p);

/// Halton points 1..count (index 0 skipped) pushed through the Gaussian
/// quantile. Deterministic.
FrequencyPool sample_qmc(const SpectralDensity& density, Index count);

/// Rows of `data` are points.
FeatureMatrix feature_map(const Matrix& data, const FrequencyPool& pool);

/// phi(x)^T phi(x') for the pool's map.
double approx_kernel_entry(std::span<const double> x, std::span<const double> xp,
                           const FrequencyPool& pool);

/// Density values p(w_i) for every row of the pool.
Vector density_values(const SpectralDensity& density, const FrequencyPool& pool);

}  // namespace slrff
