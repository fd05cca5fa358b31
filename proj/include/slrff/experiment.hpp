#pragma once

#include "slrff/dataset.hpp"
#include "slrff/krr.hpp"
#include "slrff/sampler.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace slrff {

enum class ExperimentMode {
  Full,        // CV, fit, accuracy, relative error, timings
  ApproxOnly,  // relative error only
  TimingOnly,  // feature-generation and solve timings only
};

struct ExperimentConfig {
  std::vector<Method> methods{Method::SurrogateRFF};
  std::vector<double> s_multipliers{1.0};  // s = round(multiplier * d)
  double pool_multiplier = 1.0;            // l = pool_multiplier * s
  double sigma = 1.0;
  std::vector<double> lambda_grid{0.05, 0.1, 0.5, 1.0};
  int folds = 5;
  int trials = 10;
  std::uint64_t seed = 0;
  Index error_subsample = 1000;  // 0 disables the relative error
  SurrogateVariant variant = SurrogateVariant::Simplified;
  SplitPolicy split_policy = SplitPolicy::RandomHalf;
  int threads = 1;
  ExperimentMode mode = ExperimentMode::Full;

  /// Throws ShapeError on invalid settings.
  void validate() const;
};

struct TrialRecord {
  Method method = Method::RFF;
  Index s = 0;
  int trial = 0;
  double accuracy = 0.0;   // NaN when not measured
  double rel_error = 0.0;  // NaN when not measured
  double gen_time_s = 0.0;
  double solve_time_s = 0.0;
  double lambda = 0.0;
};

/// s for a multiplier of the data dimension (at least 1).
Index feature_count(double multiplier, Index dimension);

/// Feature generation bracketed by a wall-clock timer. The timer covers
/// exactly one generate_features call: pool sampling, scoring, resampling
/// and feature-matrix construction.
struct TimedFeatures {
  SampledFeatures features;
  double seconds = 0.0;
  std::chrono::steady_clock::time_point started;
  std::chrono::steady_clock::time_point stopped;
};

TimedFeatures time_feature_generation(const Matrix& data, const Vector& labels,
                                      const SamplerConfig& sampler, double lambda,
                                      RngSeed seed, const PipelineHooks& hooks = {});

/// ||K - Z Z^T||_2 / ||K||_2 on a seeded subsample of `data`.
double subsampled_relative_error(const Matrix& data, const FrequencyPool& pool,
                                 const KernelSpec& kernel, Index subsample,
                                 RngSeed seed);

using RecordSink = std::function<void(const TrialRecord&)>;

/// Runs every (method, s, trial) cell. The sink sees records as they
/// complete (serialized); the returned list is ordered by method, s, trial.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        const Dataset& data,
                                        const RecordSink& sink = {});

}  // namespace slrff
