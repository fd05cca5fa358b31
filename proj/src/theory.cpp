#include "slrff/theory.hpp"

#include "slrff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slrff {

std::string to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::Exponential: return "Exponential";
    case DecayKind::Polynomial: return "Polynomial";
    case DecayKind::Slowest: return "Slowest";
    case DecayKind::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

namespace {

double feature_requirement(double big_d, double small_d, double delta) {
  return 5.0 * big_d * std::log(16.0 * small_d) / delta;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
  return fit;
}

}  // namespace

BoundReport required_features(const KernelMatrix& kernel, const Vector& labels,
                              double lambda, double delta,
                              const BoundOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ShapeError("required_features: delta must lie in (0, 1)");
  }
  if (!(lambda > 0.0)) throw ShapeError("required_features: lambda must be > 0");
  if (kernel.size() > kExactCap) {
    throw ShapeError("required_features: n exceeds the exact eigendecomposition cap");
  }
  BoundReport r;
  r.n = kernel.size();
  r.delta = delta;
  r.lambda = lambda;
  r.lambda_star = options.lambda_star.value_or(lambda);
  const double n = static_cast<double>(r.n);

  const Vector ev = linalg::symmetric_eigenvalues_desc(kernel.entries);
  r.lambda_max = ev(0);
  double dof = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double e = std::max(ev(i), 0.0);
    dof += e / (e + n * lambda);
  }
  r.dof = dof;
  r.surrogate_dof = surrogate_dof(kernel, labels, lambda);
  r.m = r.surrogate_dof * r.lambda_max / (r.lambda_max + n * lambda);
  r.s_required_surrogate = feature_requirement(r.surrogate_dof, r.dof, delta);
  r.s_required_erls = feature_requirement(r.dof, r.dof, delta);

  if (n * lambda > r.lambda_max) {
    std::ostringstream msg;
    msg << "n*lambda = " << n * lambda << " exceeds lambda_1 = " << r.lambda_max
        << "; the bound assumes 0 <= n*lambda <= lambda_1";
    r.warnings.push_back(msg.str());
  }
  if (16.0 * r.dof <= 1.0) {
    r.warnings.push_back("16 d_K^lambda <= 1: the log factor is nonpositive");
  }

  if (options.feature_count) {
    const double z0_sq = 1.0 / static_cast<double>(*options.feature_count);
    const double first = 7.0 * z0_sq * std::log(16.0 * r.dof) / (lambda * delta);
    double second = r.s_required_surrogate;
    if (r.lambda_star != lambda) {
      double dof_star = 0.0;
      for (Index i = 0; i < ev.size(); ++i) {
        const double e = std::max(ev(i), 0.0);
        dof_star += e / (e + n * r.lambda_star);
      }
      second = feature_requirement(surrogate_dof(kernel, labels, r.lambda_star), dof_star, delta);
    }
    r.s_required_two_stage = std::max(first, second);
    r.warnings.push_back(
        "z0 taken as 1/sqrt(s) under the normalized map; the bound is ambiguous "
        "about this normalization");
  }

  const Vector nonneg = ev.cwiseMax(0.0);
  if (nonneg.size() >= 4) {
    r.decay = classify_decay(nonneg);
    if (r.decay.kind != DecayKind::Unclassified) {
      r.asymptotic = asymptotic_orders(r.decay, r.n);
    }
  }
  return r;
}

double leverage_ratio_sup(const LeverageScores& exact, const LeverageScores& surrogate,
                   double surrogate_dof_value) {
  if (exact.per_frequency.size() != surrogate.per_frequency.size()) {
    throw ShapeError("leverage_ratio_sup: score vectors differ in length");
  }
  double sup = 0.0;
  for (Index i = 0; i < exact.per_frequency.size(); ++i) {
    const double q = surrogate.per_frequency(i) / surrogate_dof_value;
    if (q > 0.0) sup = std::max(sup, exact.per_frequency(i) / q);
  }
  return sup;
}

DecayRegime classify_decay(const Vector& eigenvalues) {
  if (eigenvalues.size() < 4) {
    throw ShapeError("classify_decay: need at least 4 eigenvalues");
  }
  std::vector<double> idx, log_idx, log_val;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues(i);
    if (v < 0.0) throw ShapeError("classify_decay: eigenvalues must be nonnegative");
    if (i > 0 && v > eigenvalues(i - 1)) {
      throw ShapeError("classify_decay: eigenvalues must be nonincreasing");
    }
    if (v > 0.0) {
      const double one_based = static_cast<double>(i + 1);
      idx.push_back(one_based);
      log_idx.push_back(std::log(one_based));
      log_val.push_back(std::log(v));
    }
  }
  DecayRegime out;
  if (idx.size() < 4) return out;

  const LineFit exp_fit = least_squares(idx, log_val);
  const LineFit pow_fit = least_squares(log_idx, log_val);
  const double best = std::max(exp_fit.r_squared, pow_fit.r_squared);
  if (best < 0.95) {
    out.r_squared = best;
    return out;
  }
  if (exp_fit.r_squared > pow_fit.r_squared) {
    out.kind = DecayKind::Exponential;
    out.rate = -exp_fit.slope;
    out.r_squared = exp_fit.r_squared;
    return out;
  }
  out.r_squared = pow_fit.r_squared;
  const double t = -pow_fit.slope / 2.0;
  // n/i corresponds to t = 1/2; anything closer to that than to t = 1 is
  // reported as the slowest case.
  if (t < 0.75) {
    out.kind = DecayKind::Slowest;
  } else {
    out.kind = DecayKind::Polynomial;
    out.t = t;
  }
  return out;
}

AsymptoticOrders asymptotic_orders(const DecayRegime& regime, Index n) {
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn);
  const double ln = std::log(nn);
  switch (regime.kind) {
    case DecayKind::Exponential:
      return {ln * ln, root * std::log(ln)};
    case DecayKind::Polynomial:
      return {std::pow(nn, 1.0 / (4.0 * regime.t)) * ln, root * ln};
    case DecayKind::Slowest:
      return {root * ln, root * ln};
    case DecayKind::Unclassified:
      break;
  }
  throw ShapeError("asymptotic_orders: unclassified spectrum");
}

}  // namespace slrff
