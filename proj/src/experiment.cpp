#include "slrff/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace slrff {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}
}  // namespace

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ShapeError("config: no methods");
  if (trials < 1) throw ShapeError("config: trials must be >= 1");
  if (s_multipliers.empty()) throw ShapeError("config: no s multipliers");
  for (double m : s_multipliers) {
    if (!(m > 0.0)) throw ShapeError("config: s multipliers must be positive");
  }
  if (!(pool_multiplier >= 1.0)) throw ShapeError("config: pool multiplier must be >= 1");
  if (!(sigma > 0.0)) throw ShapeError("config: sigma must be positive");
  if (lambda_grid.empty()) throw ShapeError("config: empty lambda grid");
  for (double l : lambda_grid) {
    if (!(l > 0.0)) throw ShapeError("config: lambda values must be positive");
  }
  if (folds < 2 && lambda_grid.size() > 1) throw ShapeError("config: folds must be >= 2");
  if (error_subsample < 0) throw ShapeError("config: error subsample must be >= 0");
  if (threads < 1) throw ShapeError("config: threads must be >= 1");
}

Index feature_count(double multiplier, Index dimension) {
  return std::max<Index>(1, static_cast<Index>(std::llround(multiplier * static_cast<double>(dimension))));
}

TimedFeatures time_feature_generation(const Matrix& data, const Vector& labels,
                                      const SamplerConfig& sampler, double lambda,
                                      RngSeed seed, const PipelineHooks& hooks) {
  TimedFeatures out;
  out.started = Clock::now();
  out.features = generate_features(data, labels, sampler, lambda, seed, hooks);
  out.stopped = Clock::now();
  out.seconds = seconds_between(out.started, out.stopped);
  return out;
}

double subsampled_relative_error(const Matrix& data, const FrequencyPool& pool,
                                 const KernelSpec& kernel, Index subsample,
                                 RngSeed seed) {
  const std::vector<Index> rows = subsample_rows(data.rows(), subsample, seed);
  Matrix sub(static_cast<Index>(rows.size()), data.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) sub.row(static_cast<Index>(k)) = data.row(rows[k]);
  return relative_approx_error(kernel_matrix(sub, kernel), feature_map(sub, pool));
}

namespace {

struct Cell {
  Method method;
  double multiplier;
  int trial;
};

TrialRecord run_cell(const ExperimentConfig& config, const Dataset& data,
                     const Cell& cell) {
  TrialRecord rec;
  rec.method = cell.method;
  rec.trial = cell.trial;
  rec.s = feature_count(cell.multiplier, data.dimension());
  rec.accuracy = kNaN;
  rec.rel_error = kNaN;

  // Splits and feature seeds depend only on (trial, s) so methods are paired.
  const RngSeed trial_seed =
      derive_seed(RngSeed{config.seed}, static_cast<std::uint64_t>(cell.trial));
  const TrainTest tt = split(data, config.split_policy, trial_seed);
  const RngSeed feature_seed = derive_seed(trial_seed, 1000 + static_cast<std::uint64_t>(rec.s));

  SamplerConfig sampler;
  sampler.method = cell.method;
  sampler.kernel = KernelSpec(config.sigma);
  sampler.target = rec.s;
  sampler.pool_multiplier = config.pool_multiplier;
  sampler.variant = config.variant;

  double lambda = config.lambda_grid.front();
  if (config.mode == ExperimentMode::Full && config.lambda_grid.size() > 1) {
    const CvReport cv = cross_validate(tt.train.features, tt.train.labels, sampler,
                                       config.lambda_grid, config.folds,
                                       derive_seed(trial_seed, 2000 + static_cast<std::uint64_t>(rec.s)));
    lambda = cv.chosen_lambda;
  }
  rec.lambda = lambda;

  const TimedFeatures timed = time_feature_generation(
      tt.train.features, tt.train.labels, sampler, lambda, feature_seed);
  rec.gen_time_s = timed.seconds;

  if (config.mode != ExperimentMode::ApproxOnly) {
    const auto t0 = Clock::now();
    const KrrModel model = fit(timed.features.train_features, tt.train.labels, lambda,
                               timed.features.pool);
    rec.solve_time_s = seconds_between(t0, Clock::now());
    if (config.mode == ExperimentMode::Full) {
      rec.accuracy = classify_accuracy(predict(model, tt.test.features), tt.test.labels);
    }
  }
  if (config.mode != ExperimentMode::TimingOnly && config.error_subsample > 0) {
    rec.rel_error = subsampled_relative_error(tt.train.features, timed.features.pool,
                                              sampler.kernel, config.error_subsample,
                                              derive_seed(trial_seed, 3000));
  }
  return rec;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        const Dataset& data, const RecordSink& sink) {
  config.validate();
  std::vector<Cell> cells;
  for (Method m : config.methods) {
    for (double mult : config.s_multipliers) {
      for (int t = 0; t < config.trials; ++t) cells.push_back({m, mult, t});
    }
  }
  std::vector<TrialRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(sink_mutex);
        if (failure) return;
      }
      try {
        records[i] = run_cell(config, data, cells[i]);
        std::lock_guard lock(sink_mutex);
        if (sink) sink(records[i]);
      } catch (const std::exception& e) {
        const Cell& c = cells[i];
        std::lock_guard lock(sink_mutex);
        if (!failure) {
          const std::string context = "method=" + std::string(to_string(c.method)) +
                                      " s=" + std::to_string(feature_count(c.multiplier, data.dimension())) +
                                      " trial=" + std::to_string(c.trial) + ": " + e.what();
          try {
            std::rethrow_exception(std::current_exception());
          } catch (const DataError&) {
            failure = std::make_exception_ptr(DataError(context));
          } catch (const NumericalError&) {
            failure = std::make_exception_ptr(NumericalError(context));
          } catch (const ShapeError&) {
            failure = std::make_exception_ptr(ShapeError(context));
          } catch (...) {
            failure = std::make_exception_ptr(std::runtime_error(context));
          }
        }
      }
    }
  };

  const int threads = config.mode == ExperimentMode::TimingOnly ? 1 : config.threads;
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace slrff
