#include "slrff/krr.hpp"

#include "slrff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace slrff {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ShapeError("krr: lambda must be positive and finite");
  }
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = m.row(rows[k]);
  return out;
}

Vector select(const Vector& v, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Index>(k)) = v(rows[k]);
  return out;
}

}  // namespace

RidgeSystem::RidgeSystem(const FeatureMatrix& features, const Vector& labels)
    : n_(features.rows()) {
  if (labels.size() != features.rows()) {
    throw ShapeError("fit: label count " + std::to_string(labels.size()) +
                     " does not match feature rows " + std::to_string(features.rows()));
  }
  if (!features.entries.allFinite() || !labels.allFinite()) {
    throw NumericalError("fit: non-finite inputs");
  }
  const Index m = features.entries.cols();
  gram_ = Matrix::Zero(m, m);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(features.entries.transpose());
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  rhs_ = features.entries.transpose() * labels;
}

double RidgeSystem::relative_residual(const Vector& beta, double lambda) const {
  const double nl = static_cast<double>(n_) * lambda;
  const Vector r = gram_ * beta + nl * beta - rhs_;
  const double scale = rhs_.norm();
  return scale == 0.0 ? r.norm() : r.norm() / scale;
}

Vector RidgeSystem::solve(double lambda) const {
  check_lambda(lambda);
  Matrix a = gram_;
  a.diagonal().array() += static_cast<double>(n_) * lambda;
  const linalg::SpdFactor factor(a);
  Vector beta = factor.solve(rhs_);
  if (relative_residual(beta, lambda) > 1e-10) {
    const Vector r = rhs_ - a * beta;
    beta += factor.solve(r);
  }
  const double res = relative_residual(beta, lambda);
  if (!(res <= 1e-8)) {
    throw NumericalError("fit: normal-equation residual " + std::to_string(res) +
                         " exceeds 1e-8");
  }
  return beta;
}

KrrModel fit(const FeatureMatrix& features, const Vector& labels, double lambda,
             FrequencyPool pool) {
  check_lambda(lambda);
  const RidgeSystem system(features, labels);
  return KrrModel{system.solve(lambda), std::move(pool), lambda};
}

Vector fit_exact(const KernelMatrix& kernel, const Vector& labels, double lambda,
                 Index cap) {
  check_lambda(lambda);
  if (kernel.size() > cap) {
    throw ShapeError("fit_exact: n = " + std::to_string(kernel.size()) +
                     " exceeds the exact cap " + std::to_string(cap));
  }
  if (labels.size() != kernel.size()) {
    throw ShapeError("fit_exact: label count does not match kernel size");
  }
  Matrix a = kernel.entries;
  a.diagonal().array() += static_cast<double>(kernel.size()) * lambda;
  return linalg::SpdFactor(a).solve(labels);
}

Vector predict(const KrrModel& model, const Matrix& data) {
  if (model.beta.size() != 2 * model.pool.size()) {
    throw ShapeError("predict: coefficient length does not match the pool");
  }
  return feature_map(data, model.pool).entries * model.beta;
}

double classify_accuracy(const Vector& predictions, const Vector& labels) {
  if (predictions.size() != labels.size()) {
    throw ShapeError("classify_accuracy: length mismatch");
  }
  if (predictions.size() == 0) throw ShapeError("classify_accuracy: empty input");
  Index hits = 0;
  for (Index i = 0; i < predictions.size(); ++i) {
    const double sign = predictions(i) >= 0.0 ? 1.0 : -1.0;
    if (sign == labels(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double empirical_risk(const Vector& predictions, const Vector& labels) {
  if (predictions.size() != labels.size() || labels.size() == 0) {
    throw ShapeError("empirical_risk: length mismatch or empty input");
  }
  return (predictions - labels).squaredNorm() / static_cast<double>(labels.size());
}

double ridge_objective(const FeatureMatrix& features, const Vector& labels,
                       const Vector& beta, double lambda) {
  const Vector fitted = features.entries * beta;
  return empirical_risk(fitted, labels) + lambda * beta.squaredNorm();
}

std::vector<int> assign_folds(Index n, int folds, RngSeed seed) {
  if (folds < 2) throw ShapeError("cross_validate: folds must be >= 2");
  if (n < folds) {
    throw ShapeError("cross_validate: " + std::to_string(folds) +
                     " folds exceed the " + std::to_string(n) + " available rows");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed.value);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    // Contiguous blocks of the permutation, sizes differing by at most one.
    fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] =
        static_cast<int>((k * folds) / n);
  }
  return fold_of;
}

CvReport cross_validate(const Matrix& data, const Vector& labels,
                        const SamplerConfig& sampler, std::vector<double> lambda_grid,
                        int folds, RngSeed seed) {
  if (lambda_grid.empty()) throw ShapeError("cross_validate: empty lambda grid");
  for (double l : lambda_grid) check_lambda(l);
  if (labels.size() != data.rows()) {
    throw ShapeError("cross_validate: label count does not match data rows");
  }
  std::sort(lambda_grid.begin(), lambda_grid.end());
  lambda_grid.erase(std::unique(lambda_grid.begin(), lambda_grid.end()),
                    lambda_grid.end());

  const std::vector<int> fold_of = assign_folds(data.rows(), folds, seed);
  std::vector<double> acc_sum(lambda_grid.size(), 0.0);

  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train_rows, val_rows;
    for (Index i = 0; i < data.rows(); ++i) {
      (fold_of[static_cast<std::size_t>(i)] == f ? val_rows : train_rows).push_back(i);
    }
    const Matrix x_train = select_rows(data, train_rows);
    const Vector y_train = select(labels, train_rows);
    const Matrix x_val = select_rows(data, val_rows);
    const Vector y_val = select(labels, val_rows);
    const RngSeed fold_seed = derive_seed(seed, static_cast<std::uint64_t>(f) + 1);

    if (!depends_on_lambda(sampler.method)) {
      const SampledFeatures sf =
          generate_features(x_train, y_train, sampler, lambda_grid.front(), fold_seed);
      const RidgeSystem system(sf.train_features, y_train);
      const Matrix z_val = feature_map(x_val, sf.pool).entries;
      for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
        acc_sum[g] += classify_accuracy(z_val * system.solve(lambda_grid[g]), y_val);
      }
    } else {
      for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
        const SampledFeatures sf =
            generate_features(x_train, y_train, sampler, lambda_grid[g], fold_seed);
        const KrrModel model = fit(sf.train_features, y_train, lambda_grid[g], sf.pool);
        acc_sum[g] += classify_accuracy(predict(model, x_val), y_val);
      }
    }
  }

  CvReport report;
  report.lambda_grid = lambda_grid;
  double best = -1.0;
  for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
    const double mean = acc_sum[g] / folds;
    report.mean_accuracy.push_back(mean);
    if (mean >= best) {  // ascending grid: ties go to the larger lambda
      best = mean;
      report.chosen_lambda = lambda_grid[g];
    }
  }
  return report;
}

}  // namespace slrff
