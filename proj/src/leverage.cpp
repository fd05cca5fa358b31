#include "slrff/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace slrff {

std::string_view to_string(LeverageKind kind) {
  switch (kind) {
    case LeverageKind::ExactERLS: return "ExactERLS";
    case LeverageKind::Surrogate: return "Surrogate";
    case LeverageKind::SurrogateSimplified: return "SurrogateSimplified";
  }
  return "unknown";
}

std::string_view to_string(SurrogateVariant variant) {
  return variant == SurrogateVariant::Full ? "full" : "simplified";
}

namespace {

void check_pool_features(const FeatureMatrix& z, const Vector& density) {
  if (z.entries.cols() != 2 * z.frequency_count) {
    throw ShapeError("leverage: feature matrix must have 2 columns per frequency");
  }
  if (density.size() != z.frequency_count) {
    throw ShapeError("leverage: density_values length " +
                     std::to_string(density.size()) + " != frequency count " +
                     std::to_string(z.frequency_count));
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ShapeError("leverage: lambda must be positive");
  }
}

Matrix kernel_plus_ridge(const KernelMatrix& kernel, double lambda) {
  Matrix a = kernel.entries;
  a.diagonal().array() += static_cast<double>(kernel.size()) * lambda;
  return a;
}

}  // namespace

RegularizedKernelFactor::RegularizedKernelFactor(const KernelMatrix& kernel,
                                                 double lambda, Index cap)
    : lambda_(lambda),
      factor_([&] {
        if (kernel.size() > cap) {
          throw ShapeError("exact leverage: n = " + std::to_string(kernel.size()) +
                           " exceeds the exact-mode cap " + std::to_string(cap));
        }
        check_lambda(lambda);
        return linalg::SpdFactor(kernel_plus_ridge(kernel, lambda));
      }()) {}

LeverageScores exact_leverage(const RegularizedKernelFactor& kreg,
                              const FeatureMatrix& pool_features,
                              const Vector& density_values) {
  check_pool_features(pool_features, density_values);
  if (pool_features.rows() != kreg.size()) {
    throw ShapeError("exact_leverage: feature rows do not match kernel size");
  }
  const Matrix solved = kreg.factor().solve(pool_features.entries);
  LeverageScores out;
  out.kind = LeverageKind::ExactERLS;
  out.per_frequency.resize(pool_features.frequency_count);
  for (Index i = 0; i < pool_features.frequency_count; ++i) {
    const double q = pool_features.cos_column(i).dot(solved.col(2 * i)) +
                     pool_features.sin_column(i).dot(solved.col(2 * i + 1));
    out.per_frequency(i) = density_values(i) * std::max(q, 0.0);
  }
  out.normalizer = out.per_frequency.sum();
  return out;
}

LeverageScores surrogate_leverage(const Vector& labels,
                                  const FeatureMatrix& pool_features,
                                  const Vector& density_values, double lambda,
                                  bool simplified) {
  check_pool_features(pool_features, density_values);
  check_lambda(lambda);
  if (labels.size() != pool_features.rows()) {
    throw ShapeError("surrogate_leverage: label count does not match feature rows");
  }
  const double n = static_cast<double>(labels.size());
  const Vector corr = pool_features.entries.transpose() * labels;  // 2l
  LeverageScores out;
  out.kind = simplified ? LeverageKind::SurrogateSimplified : LeverageKind::Surrogate;
  out.scale = 1.0 / (n * n * lambda);
  out.per_frequency.resize(pool_features.frequency_count);
  for (Index i = 0; i < pool_features.frequency_count; ++i) {
    double value = corr(2 * i) * corr(2 * i) + corr(2 * i + 1) * corr(2 * i + 1);
    if (!simplified) {
      value += n * (pool_features.cos_column(i).squaredNorm() +
                    pool_features.sin_column(i).squaredNorm());
    }
    out.per_frequency(i) = density_values(i) * out.scale * value;
  }
  out.normalizer = out.per_frequency.sum();
  return out;
}

double degrees_of_freedom(const KernelMatrix& kernel, double lambda) {
  check_lambda(lambda);
  if (kernel.size() > kExactCap) {
    throw ShapeError("degrees_of_freedom: n exceeds the exact-mode cap");
  }
  const double nl = static_cast<double>(kernel.size()) * lambda;
  const Vector ev = linalg::symmetric_eigenvalues_desc(kernel.entries);
  double sum = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double e = std::max(ev(i), 0.0);
    sum += e / (e + nl);
  }
  return sum;
}

double surrogate_dof(const KernelMatrix& kernel, const Vector& labels,
                     double lambda) {
  check_lambda(lambda);
  if (labels.size() != kernel.size()) {
    throw ShapeError("surrogate_dof: label count does not match kernel size");
  }
  const double n = static_cast<double>(kernel.size());
  const double quad = labels.dot(kernel.entries * labels);
  return (quad + n * kernel.entries.trace()) / (n * n * lambda);
}

ResamplePlan build_resample_plan(const LeverageScores& scores, Index target) {
  const Index l = scores.per_frequency.size();
  if (target < 1) throw ShapeError("build_resample_plan: target must be >= 1");
  if (target > l) {
    throw ShapeError("build_resample_plan: target " + std::to_string(target) +
                     " exceeds pool size " + std::to_string(l));
  }
  double total = 0.0;
  for (Index i = 0; i < l; ++i) {
    const double v = scores.per_frequency(i);
    if (!std::isfinite(v) || v < 0.0) {
      throw NumericalError("build_resample_plan: scores must be finite and >= 0");
    }
    total += v;
  }
  if (!(total > 0.0)) {
    throw NumericalError(
        "build_resample_plan: all scores are zero (degenerate labels or features)");
  }
  return ResamplePlan{l, target, scores.per_frequency / total};
}

ResampledPool resample_with_picks(const ResamplePlan& plan,
                                  const FrequencyPool& pool, RngSeed seed,
                                  FrequencySource source) {
  if (plan.pool_size != pool.size() || plan.probabilities.size() != pool.size()) {
    throw ShapeError("resample: plan does not match pool size");
  }
  const Index l = plan.pool_size;
  std::vector<double> cumulative(static_cast<std::size_t>(l));
  double running = 0.0;
  Index last_positive = -1;
  for (Index i = 0; i < l; ++i) {
    running += plan.probabilities(i);
    cumulative[static_cast<std::size_t>(i)] = running;
    if (plan.probabilities(i) > 0.0) last_positive = i;
  }
  if (last_positive < 0) throw NumericalError("resample: empty support");

  std::mt19937_64 rng(seed.value);
  std::uniform_real_distribution<double> uniform(0.0, running);
  ResampledPool out;
  out.picks.reserve(static_cast<std::size_t>(plan.target));
  out.pool.frequencies.resize(plan.target, pool.dimension());
  out.pool.weights.resize(plan.target);
  out.pool.source = source;
  for (Index k = 0; k < plan.target; ++k) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    Index idx = static_cast<Index>(it - cumulative.begin());
    // u can round up to the total; fold back onto the support.
    if (idx > last_positive) idx = last_positive;
    out.picks.push_back(idx);
    out.pool.frequencies.row(k) = pool.frequencies.row(idx);
    out.pool.weights(k) = 1.0 / (static_cast<double>(l) * plan.probabilities(idx));
  }
  return out;
}

FrequencyPool resample(const ResamplePlan& plan, const FrequencyPool& pool,
                       RngSeed seed, FrequencySource source) {
  return resample_with_picks(plan, pool, seed, source).pool;
}

FeatureMatrix gather_features(const FeatureMatrix& pool_features,
                              const ResampledPool& resampled) {
  const Index s = resampled.pool.size();
  const Index l = pool_features.frequency_count;
  FeatureMatrix z{Matrix(pool_features.rows(), 2 * s), s};
  for (Index k = 0; k < s; ++k) {
    const Index src = resampled.picks[static_cast<std::size_t>(k)];
    // Pool columns carry 1/sqrt(l); the target carries sqrt(r_k / s).
    const double factor = std::sqrt(resampled.pool.weights(k) *
                                    static_cast<double>(l) / static_cast<double>(s));
    z.entries.col(2 * k) = factor * pool_features.cos_column(src);
    z.entries.col(2 * k + 1) = factor * pool_features.sin_column(src);
  }
  return z;
}

FeatureMatrix gather_features(FeatureMatrix&& pool_features,
                              const ResampledPool& resampled) {
  const Index s = resampled.pool.size();
  const Index l = pool_features.frequency_count;
  const auto& picks = resampled.picks;
  if (static_cast<Index>(picks.size()) != s || s > l) {
    throw ShapeError("gather_features: picks do not fit the pool");
  }
  Matrix& m = pool_features.entries;
  const Index n = m.rows();
  auto factor = [&](Index k) {
    return std::sqrt(resampled.pool.weights(k) * static_cast<double>(l) /
                     static_cast<double>(s));
  };

  // Target pair k is overwritten only once no other pending target still
  // reads pair k. Cycles are broken by parking one pair in a side buffer.
  std::vector<Index> readers(static_cast<std::size_t>(l), 0);
  for (Index k = 0; k < s; ++k) {
    const Index src = picks[static_cast<std::size_t>(k)];
    if (src < 0 || src >= l) throw ShapeError("gather_features: pick out of range");
    if (src != k) ++readers[static_cast<std::size_t>(src)];
  }
  std::vector<char> done(static_cast<std::size_t>(s), 0);
  std::vector<Index> ready;
  for (Index k = 0; k < s; ++k) {
    if (readers[static_cast<std::size_t>(k)] == 0) ready.push_back(k);
  }
  std::vector<std::pair<Index, Matrix>> parked;
  auto source = [&](Index src) -> Eigen::Ref<const Matrix> {
    for (const auto& [idx, cols] : parked) {
      if (idx == src) return cols;
    }
    return m.middleCols(2 * src, 2);
  };

  Index remaining = s;
  Index scan = 0;
  while (remaining > 0) {
    if (ready.empty()) {
      while (done[static_cast<std::size_t>(scan)]) ++scan;
      parked.emplace_back(scan, m.middleCols(2 * scan, 2));
      ready.push_back(scan);
    }
    const Index k = ready.back();
    ready.pop_back();
    const Index src = picks[static_cast<std::size_t>(k)];
    const double f = factor(k);
    if (src == k) {
      m.middleCols(2 * k, 2) = f * source(k);
    } else {
      m.middleCols(2 * k, 2) = f * source(src);
      auto& r = readers[static_cast<std::size_t>(src)];
      if (--r == 0 && src < s && !done[static_cast<std::size_t>(src)] &&
          std::none_of(parked.begin(), parked.end(),
                       [&](const auto& p) { return p.first == src; })) {
        ready.push_back(src);
      }
    }
    done[static_cast<std::size_t>(k)] = 1;
    --remaining;
  }
  if (s < l) m.conservativeResize(n, 2 * s);
  pool_features.frequency_count = s;
  return std::move(pool_features);
}

namespace {

void check_params(const Matrix& data, const Vector& labels,
                  const PipelineParams& params) {
  if (params.target < 1) throw ShapeError("pipeline: s must be >= 1");
  if (params.pool_size < params.target) {
    throw ShapeError("pipeline: pool size l must be >= s");
  }
  if (labels.size() != data.rows()) {
    throw ShapeError("pipeline: label count does not match data rows");
  }
  check_lambda(params.lambda);
}

}  // namespace

SampledFeatures surrogate_features(const Matrix& data, const Vector& labels,
                                   const PipelineParams& params,
                                   const PipelineHooks& hooks) {
  check_params(data, labels, params);
  const SpectralDensity density = spectral_density(params.kernel, data.cols());

  hooks.enter("sample");
  const FrequencyPool pool =
      sample_mc(density, params.pool_size, derive_seed(params.seed, 0));
  hooks.leave("sample");

  hooks.enter("features");
  FeatureMatrix pool_features = feature_map(data, pool);
  hooks.leave("features");

  // The pool is already distributed as p, so the empirical base measure
  // absorbs p(w_i); unit density values give the pooled q~ (or q~').
  hooks.enter("scores");
  const LeverageScores scores = surrogate_leverage(
      labels, pool_features, Vector::Ones(pool.size()), params.lambda,
      params.variant == SurrogateVariant::Simplified);
  const ResamplePlan plan = build_resample_plan(scores, params.target);
  hooks.leave("scores");

  hooks.enter("resample");
  ResampledPool drawn = resample_with_picks(plan, pool, derive_seed(params.seed, 1),
                                            FrequencySource::SurrogateResampled);
  hooks.leave("resample");

  hooks.enter("gather");
  FeatureMatrix train = gather_features(std::move(pool_features), drawn);
  hooks.leave("gather");
  return {std::move(drawn.pool), std::move(train)};
}

FrequencyPool surrogate_pipeline(const Matrix& data, const Vector& labels,
                                 const PipelineParams& params) {
  return surrogate_features(data, labels, params).pool;
}

LeverageScores approximate_leverage(const FeatureMatrix& pool_features,
                                    double lambda) {
  check_lambda(lambda);
  if (pool_features.entries.cols() != 2 * pool_features.frequency_count) {
    throw ShapeError("approximate_leverage: malformed feature matrix");
  }
  const Index m = pool_features.entries.cols();
  const double nl = static_cast<double>(pool_features.rows()) * lambda;
  // z^T (Z Z^T + nl I)^{-1} z for a column z of Z equals
  // [G (G + nl I)^{-1}]_{cc} with G = Z^T Z (push-through identity).
  Matrix gram = Matrix::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(pool_features.entries.transpose());
  Matrix reg = gram;
  reg.diagonal().array() += nl;
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const linalg::SpdFactor factor(reg);
  const Matrix h = factor.solve(gram);  // (G + nl I)^{-1} G, same diagonal
  LeverageScores out;
  out.kind = LeverageKind::ExactERLS;
  out.per_frequency.resize(pool_features.frequency_count);
  for (Index i = 0; i < pool_features.frequency_count; ++i) {
    out.per_frequency(i) = std::max(h(2 * i, 2 * i) + h(2 * i + 1, 2 * i + 1), 0.0);
  }
  out.normalizer = out.per_frequency.sum();
  return out;
}

SampledFeatures erls_baseline_features(const Matrix& data, const Vector& labels,
                                       const PipelineParams& params,
                                       const PipelineHooks& hooks) {
  check_params(data, labels, params);
  const SpectralDensity density = spectral_density(params.kernel, data.cols());

  hooks.enter("sample");
  const FrequencyPool pool =
      sample_mc(density, params.pool_size, derive_seed(params.seed, 0));
  hooks.leave("sample");

  hooks.enter("features");
  const FeatureMatrix pool_features = feature_map(data, pool);
  hooks.leave("features");

  hooks.enter("scores");
  const LeverageScores scores = approximate_leverage(pool_features, params.lambda);
  const ResamplePlan plan = build_resample_plan(scores, params.target);
  hooks.leave("scores");

  hooks.enter("resample");
  ResampledPool drawn = resample_with_picks(plan, pool, derive_seed(params.seed, 1),
                                            FrequencySource::LeverageResampled);
  hooks.leave("resample");

  hooks.enter("gather");
  FeatureMatrix train = gather_features(pool_features, drawn);
  hooks.leave("gather");
  return {std::move(drawn.pool), std::move(train)};
}

FrequencyPool erls_baseline_pipeline(const Matrix& data, const Vector& labels,
                                     const PipelineParams& params) {
  return erls_baseline_features(data, labels, params).pool;
}

}  // namespace slrff
