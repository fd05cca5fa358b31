#pragma once

#include "slrff/features.hpp"
#include "slrff/leverage.hpp"

#include <optional>
#include <string_view>

namespace slrff {

enum class Method { RFF, QMC, LeverageRFF, SurrogateRFF };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// How to produce s frequencies for a training set.
struct SamplerConfig {
  Method method = Method::SurrogateRFF;
  KernelSpec kernel;
  Index target = 0;          // s
  double pool_multiplier = 1.0;  // l = ceil(pool_multiplier * s)
  SurrogateVariant variant = SurrogateVariant::Simplified;

  Index pool_size() const;
};

/// True when the generated frequencies depend on lambda (only the
/// leverage baseline does).
bool depends_on_lambda(Method method);

SampledFeatures generate_features(const Matrix& data, const Vector& labels,
                                  const SamplerConfig& config, double lambda,
                                  RngSeed seed, const PipelineHooks& hooks = {});

}  // namespace slrff
