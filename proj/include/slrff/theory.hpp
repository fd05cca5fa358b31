#pragma once

#include "slrff/kernels.hpp"
#include "slrff/leverage.hpp"
#include "slrff/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slrff {

enum class DecayKind { Exponential, Polynomial, Slowest, Unclassified };

std::string to_string(DecayKind kind);

struct DecayRegime {
  DecayKind kind = DecayKind::Unclassified;
  /// Fitted exponent t of lambda_i ~ n i^{-2t} (Polynomial only).
  double t = 0.0;
  /// Fitted rate c of lambda_i ~ n e^{-c i} (Exponential only).
  double rate = 0.0;
  double r_squared = 0.0;
};

/// Asymptotic feature counts of the three decay cases, without constants.
struct AsymptoticOrders {
  double erls = 0.0;       // log^2 n, n^{1/(4t)} log n, sqrt(n) log n
  double surrogate = 0.0;  // sqrt(n) log log n, sqrt(n) log n, sqrt(n) log n
};

struct BoundReport {
  double dof = 0.0;            // d_K^lambda
  double surrogate_dof = 0.0;  // D_K^lambda
  double m = 0.0;              // D_K^lambda * lambda_1 / (lambda_1 + n lambda)
  std::optional<double> l_sup; // sup_i l(w_i) / q(w_i), given scored pools
  double s_required_surrogate = 0.0;  // 5 D log(16 d) / delta
  double s_required_erls = 0.0;       // 5 d log(16 d) / delta
  /// Two-stage requirement max{7 z0^2 log(16 d)/(lambda delta),
  /// 5 D* log(16 d*)/delta}, evaluated with z0 = 1/sqrt(s) when s is given.
  std::optional<double> s_required_two_stage;
  double delta = 0.0;
  double lambda = 0.0;
  double lambda_star = 0.0;
  double lambda_max = 0.0;     // lambda_1 of K
  Index n = 0;
  DecayRegime decay;
  std::optional<AsymptoticOrders> asymptotic;
  std::vector<std::string> warnings;
};

struct BoundOptions {
  std::optional<double> lambda_star;   // defaults to lambda
  std::optional<Index> feature_count;  // s, for the z0 = 1/sqrt(s) term
};

/// Feature-count requirements from exact d and D. Requires n <= 2000.
BoundReport required_features(const KernelMatrix& kernel, const Vector& labels,
                              double lambda, double delta,
                              const BoundOptions& options = {});

/// L = sup_i l(w_i) / q(w_i) with q = surrogate / D, from exact and
/// surrogate scores of the same pool.
double leverage_ratio_sup(const LeverageScores& exact, const LeverageScores& surrogate,
                   double surrogate_dof);

/// Classifies a nonincreasing, nonnegative spectrum by least-squares fits of
/// log lambda_i against i (exponential) and log i (power law).
DecayRegime classify_decay(const Vector& eigenvalues);

AsymptoticOrders asymptotic_orders(const DecayRegime& regime, Index n);

}  // namespace slrff
