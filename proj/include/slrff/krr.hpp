#pragma once

#include "slrff/features.hpp"
#include "slrff/kernels.hpp"
#include "slrff/sampler.hpp"
#include "slrff/types.hpp"

#include <vector>

namespace slrff {

/// Ridge regression in feature space, minimizing
/// (1/n) ||y - Z beta||^2 + lambda ||beta||^2.
struct KrrModel {
  Vector beta;
  FrequencyPool pool;
  double lambda = 0.0;
};

/// Normal equations (Z^T Z + n lambda I) beta = Z^T y for a fixed Z, with
/// the Gram matrix formed once so several lambdas can be solved cheaply.
class RidgeSystem {
 public:
  RidgeSystem(const FeatureMatrix& features, const Vector& labels);

  /// Cholesky solve plus one step of iterative refinement when the relative
  /// residual exceeds 1e-10. Throws NumericalError if the final residual
  /// exceeds 1e-8.
  Vector solve(double lambda) const;

  /// ||(Z^T Z + n lambda I) beta - Z^T y|| / ||Z^T y|| (0 when Z^T y = 0).
  double relative_residual(const Vector& beta, double lambda) const;

 private:
  Index n_;
  Matrix gram_;  // full symmetric Z^T Z
  Vector rhs_;   // Z^T y
};

KrrModel fit(const FeatureMatrix& features, const Vector& labels, double lambda,
             FrequencyPool pool = {});

/// Dual coefficients alpha = (K + n lambda I)^{-1} y of exact KRR.
Vector fit_exact(const KernelMatrix& kernel, const Vector& labels, double lambda,
                 Index cap = 2000);

Vector predict(const KrrModel& model, const Matrix& data);

/// Fraction of predictions whose sign (0 counted as +1) matches the label.
double classify_accuracy(const Vector& predictions, const Vector& labels);

/// (1/n) ||predictions - labels||^2.
double empirical_risk(const Vector& predictions, const Vector& labels);

/// Training objective (1/n) ||y - Z beta||^2 + lambda ||beta||^2.
double ridge_objective(const FeatureMatrix& features, const Vector& labels,
                       const Vector& beta, double lambda);

struct CvReport {
  std::vector<double> lambda_grid;     // deduplicated, ascending
  std::vector<double> mean_accuracy;   // aligned with lambda_grid
  double chosen_lambda = 0.0;
};

/// Deterministic fold assignment: contiguous blocks of a seeded
/// permutation. Returns the fold id of every row.
std::vector<int> assign_folds(Index n, int folds, RngSeed seed);

/// k-fold cross validation of lambda. Features are re-sampled per fold with
/// fold-derived seeds. Ties are broken toward the larger lambda.
CvReport cross_validate(const Matrix& data, const Vector& labels,
                        const SamplerConfig& sampler, std::vector<double> lambda_grid,
                        int folds, RngSeed seed);

}  // namespace slrff
