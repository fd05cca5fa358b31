#include "slrff/sampler.hpp"

#include <cmath>

namespace slrff {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::RFF: return "RFF";
    case Method::QMC: return "QMC";
    case Method::LeverageRFF: return "LeverageRFF";
    case Method::SurrogateRFF: return "SurrogateRFF";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::RFF, Method::QMC, Method::LeverageRFF, Method::SurrogateRFF}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

Index SamplerConfig::pool_size() const {
  if (!(pool_multiplier >= 1.0)) {
    throw ShapeError("sampler: pool multiplier must be >= 1");
  }
  return static_cast<Index>(std::ceil(pool_multiplier * static_cast<double>(target)));
}

bool depends_on_lambda(Method method) { return method == Method::LeverageRFF; }

SampledFeatures generate_features(const Matrix& data, const Vector& labels,
                                  const SamplerConfig& config, double lambda,
                                  RngSeed seed, const PipelineHooks& hooks) {
  switch (config.method) {
    case Method::RFF:
    case Method::QMC: {
      const SpectralDensity density = spectral_density(config.kernel, data.cols());
      hooks.enter("sample");
      FrequencyPool pool = config.method == Method::RFF
                               ? sample_mc(density, config.target, seed)
                               : sample_qmc(density, config.target);
      hooks.leave("sample");
      hooks.enter("features");
      FeatureMatrix z = feature_map(data, pool);
      hooks.leave("features");
      return {std::move(pool), std::move(z)};
    }
    case Method::LeverageRFF:
    case Method::SurrogateRFF: {
      const PipelineParams params{config.kernel, config.target, config.pool_size(),
                                  lambda, config.variant, seed};
      return config.method == Method::SurrogateRFF
                 ? surrogate_features(data, labels, params, hooks)
                 : erls_baseline_features(data, labels, params, hooks);
    }
  }
  throw ShapeError("generate_features: unknown method");
}

}  // namespace slrff
