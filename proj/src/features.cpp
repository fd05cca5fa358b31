#include "slrff/features.hpp"

#include <array>
#include <cmath>
#include <random>

namespace slrff {

std::string_view to_string(FrequencySource source) {
  switch (source) {
    case FrequencySource::MonteCarlo: return "MonteCarlo";
    case FrequencySource::QMC: return "QMC";
    case FrequencySource::LeverageResampled: return "LeverageResampled";
    case FrequencySource::SurrogateResampled: return "SurrogateResampled";
  }
  return "unknown";
}

void FrequencyPool::validate() const {
  if (weights.size() != frequencies.rows()) {
    throw ShapeError("FrequencyPool: weight count does not match frequencies");
  }
  for (Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i)) || weights(i) < 0.0) {
      throw ShapeError("FrequencyPool: weights must be finite and >= 0");
    }
  }
}

FrequencyPool sample_mc(const SpectralDensity& density, Index count, RngSeed seed) {
  if (count < 1) throw ShapeError("sample_mc: frequency count must be >= 1");
  std::mt19937_64 rng(seed.value);
  std::normal_distribution<double> normal(0.0, density.stddev());
  FrequencyPool pool;
  pool.frequencies.resize(count, density.dimension());
  // Row-by-row so a prefix of a larger pool equals a smaller pool.
  for (Index i = 0; i < count; ++i) {
    for (Index k = 0; k < density.dimension(); ++k) {
      pool.frequencies(i, k) = normal(rng);
    }
  }
  pool.weights = Vector::Ones(count);
  pool.source = FrequencySource::MonteCarlo;
  return pool;
}

namespace {
constexpr std::array<unsigned, kMaxHaltonDimension> kPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,
    43,  47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101,
    103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167,
    173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};
}  // namespace

double halton_radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::span<const unsigned> halton_bases(Index dimension) {
  if (dimension < 1 || dimension > kMaxHaltonDimension) {
    throw ShapeError("halton: dimension " + std::to_string(dimension) +
                     " exceeds the prime-base table (max 64)");
  }
  return {kPrimes.data(), static_cast<std::size_t>(dimension)};
}

double inverse_normal_cdf(double p) {
  // Acklam's rational approximation followed by one Halley step against
  // erfc, which brings the error to near machine precision.
  constexpr double lo_clamp = 1e-12;
  p = std::clamp(p, lo_clamp, 1.0 - lo_clamp);

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p == 0.5) return 0.0;

  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

FrequencyPool sample_qmc(const SpectralDensity& density, Index count) {
  if (count < 1) throw ShapeError("sample_qmc: frequency count must be >= 1");
  const auto bases = halton_bases(density.dimension());
  const double scale = density.stddev();
  FrequencyPool pool;
  pool.frequencies.resize(count, density.dimension());
  for (Index i = 0; i < count; ++i) {
    for (Index k = 0; k < density.dimension(); ++k) {
      const double u = halton_radical_inverse(static_cast<std::uint64_t>(i + 1),
                                              bases[static_cast<std::size_t>(k)]);
      pool.frequencies(i, k) = scale * inverse_normal_cdf(u);
    }
  }
  pool.weights = Vector::Ones(count);
  pool.source = FrequencySource::QMC;
  return pool;
}

FeatureMatrix feature_map(const Matrix& data, const FrequencyPool& pool) {
  if (pool.size() < 1) throw ShapeError("feature_map: empty frequency pool");
  if (data.rows() < 1) throw ShapeError("feature_map: empty dataset");
  if (data.cols() != pool.dimension()) {
    throw ShapeError("feature_map: data dimension " + std::to_string(data.cols()) +
                     " does not match frequency dimension " +
                     std::to_string(pool.dimension()));
  }
  pool.validate();
  const Index n = data.rows();
  const Index s = pool.size();
  const Matrix phase = data * pool.frequencies.transpose();  // n x s
  FeatureMatrix z{Matrix(n, 2 * s), s};
  const double inv_s = 1.0 / static_cast<double>(s);
  for (Index i = 0; i < s; ++i) {
    const double scale = std::sqrt(pool.weights(i) * inv_s);
    for (Index j = 0; j < n; ++j) {
      const double t = phase(j, i);
      z.entries(j, 2 * i) = scale * std::cos(t);
      z.entries(j, 2 * i + 1) = scale * std::sin(t);
    }
  }
  return z;
}

double approx_kernel_entry(std::span<const double> x, std::span<const double> xp,
                           const FrequencyPool& pool) {
  if (x.size() != xp.size() || static_cast<Index>(x.size()) != pool.dimension()) {
    throw ShapeError("approx_kernel_entry: dimension mismatch");
  }
  if (pool.size() < 1) throw ShapeError("approx_kernel_entry: empty frequency pool");
  pool.validate();
  const Eigen::Map<const Vector> a(x.data(), static_cast<Index>(x.size()));
  const Eigen::Map<const Vector> b(xp.data(), static_cast<Index>(xp.size()));
  const Vector pa = pool.frequencies * a;
  const Vector pb = pool.frequencies * b;
  double sum = 0.0;
  for (Index i = 0; i < pool.size(); ++i) {
    sum += pool.weights(i) *
           (std::cos(pa(i)) * std::cos(pb(i)) + std::sin(pa(i)) * std::sin(pb(i)));
  }
  return sum / static_cast<double>(pool.size());
}

Vector density_values(const SpectralDensity& density, const FrequencyPool& pool) {
  Vector out(pool.size());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rows = pool.frequencies;
  for (Index i = 0; i < pool.size(); ++i) {
    out(i) = density.density(
        {rows.data() + i * rows.cols(), static_cast<std::size_t>(rows.cols())});
  }
  return out;
}

}  // namespace slrff
