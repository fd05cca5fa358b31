#pragma once

#include "slrff/features.hpp"
#include "slrff/kernels.hpp"
#include "slrff/linalg.hpp"
#include "slrff/types.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace slrff {

enum class LeverageKind { ExactERLS, Surrogate, SurrogateSimplified };

std::string_view to_string(LeverageKind kind);

/// Per-frequency leverage values and their normalizer.
///
/// Under the real cos/sin map a frequency owns two columns (c_i, s_i); every
/// quadratic form z^T A z is evaluated as c^T A c + s^T A s, the squared
/// modulus of the complex column.
struct LeverageScores {
  Vector per_frequency;
  /// Empirical sum of per_frequency unless stated otherwise.
  double normalizer = 0.0;
  LeverageKind kind = LeverageKind::Surrogate;
  /// 1 / (n^2 lambda) for surrogate kinds; kept for diagnostics.
  double scale = 0.0;
};

/// Default cap on n for anything that factors an n x n kernel matrix.
inline constexpr Index kExactCap = 2000;

/// Cholesky factor of K + n lambda I.
class RegularizedKernelFactor {
 public:
  RegularizedKernelFactor(const KernelMatrix& kernel, double lambda,
                          Index cap = kExactCap);

  Index size() const { return factor_.size(); }
  double lambda() const { return lambda_; }
  const linalg::SpdFactor& factor() const { return factor_; }

 private:
  double lambda_;
  linalg::SpdFactor factor_;
};

/// l_lambda(w_i) = p(w_i) z_i^T (K + n lambda I)^{-1} z_i for every frequency
/// of the pool feature matrix.
LeverageScores exact_leverage(const RegularizedKernelFactor& kreg,
                              const FeatureMatrix& pool_features,
                              const Vector& density_values);

/// L_lambda(w_i) = p(w_i) / (n^2 lambda) [ (y^T z_i)^2 + n ||z_i||^2 ];
/// `simplified` drops the n ||z_i||^2 term. Performs no linear solve.
LeverageScores surrogate_leverage(const Vector& labels,
                                  const FeatureMatrix& pool_features,
                                  const Vector& density_values, double lambda,
                                  bool simplified);

/// d_K^lambda = Tr[K (K + n lambda I)^{-1}], via the eigenvalues of K.
double degrees_of_freedom(const KernelMatrix& kernel, double lambda);

/// D_K^lambda = (y^T K y + n Tr K) / (n^2 lambda).
double surrogate_dof(const KernelMatrix& kernel, const Vector& labels,
                     double lambda);

/// Multinomial plan over a pool of size l for drawing `target` frequencies.
struct ResamplePlan {
  Index pool_size = 0;
  Index target = 0;
  Vector probabilities;
};

ResamplePlan build_resample_plan(const LeverageScores& scores, Index target);

struct ResampledPool {
  FrequencyPool pool;
  /// Index into the source pool for every drawn frequency.
  std::vector<Index> picks;
};

/// Draws plan.target indices i.i.d. with replacement; the weight of a draw
/// of index i is 1 / (l * probabilities[i]).
ResampledPool resample_with_picks(const ResamplePlan& plan,
                                  const FrequencyPool& pool, RngSeed seed,
                                  FrequencySource source);

FrequencyPool resample(const ResamplePlan& plan, const FrequencyPool& pool,
                       RngSeed seed, FrequencySource source);

/// Builds the feature matrix of a resampled pool from the columns of the
/// pool it was drawn from, avoiding a second pass of trigonometric
/// evaluations. Matches feature_map(data, resampled.pool) to rounding.
FeatureMatrix gather_features(const FeatureMatrix& pool_features,
                              const ResampledPool& resampled);

/// Same result, rearranging the pool's own storage instead of allocating.
FeatureMatrix gather_features(FeatureMatrix&& pool_features,
                              const ResampledPool& resampled);

enum class SurrogateVariant { Full, Simplified };

std::string_view to_string(SurrogateVariant variant);

/// Phase hooks for timing instrumentation; called with a phase name
/// ("sample", "features", "scores", "resample", "gather") on entry and exit.
struct PipelineHooks {
  std::function<void(std::string_view phase, bool entering)> on_phase;

  void enter(std::string_view p) const { if (on_phase) on_phase(p, true); }
  void leave(std::string_view p) const { if (on_phase) on_phase(p, false); }
};

/// Pool plus its training feature matrix, as produced by the pipelines.
struct SampledFeatures {
  FrequencyPool pool;
  FeatureMatrix train_features;
};

struct PipelineParams {
  KernelSpec kernel;
  Index target = 0;     // s
  Index pool_size = 0;  // l >= s
  double lambda = 0.0;
  SurrogateVariant variant = SurrogateVariant::Simplified;
  RngSeed seed;
};

/// Surrogate leverage weighted sampling: MC pool of size l, surrogate
/// scores, multinomial resampling to s frequencies. No linear solves.
SampledFeatures surrogate_features(const Matrix& data, const Vector& labels,
                                   const PipelineParams& params,
                                   const PipelineHooks& hooks = {});

FrequencyPool surrogate_pipeline(const Matrix& data, const Vector& labels,
                                 const PipelineParams& params);

/// Approximate ridge leverage scores z_i^T (Z Z^T + n lambda I)^{-1} z_i of
/// the pool columns, evaluated as diag(G (G + n lambda I)^{-1}) with
/// G = Z^T Z, summed over each cos/sin pair.
LeverageScores approximate_leverage(const FeatureMatrix& pool_features,
                                    double lambda);

/// Leverage-weighted baseline that approximates K by the pool features.
SampledFeatures erls_baseline_features(const Matrix& data, const Vector& labels,
                                       const PipelineParams& params,
                                       const PipelineHooks& hooks = {});

FrequencyPool erls_baseline_pipeline(const Matrix& data, const Vector& labels,
                                     const PipelineParams& params);

}  // namespace slrff
