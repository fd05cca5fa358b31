#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace slrff {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Seed for every random stream in the library. Identical seeds give
/// identical outputs.
struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

/// Deterministically derives an independent child seed (splitmix64 mix of
/// the parent value and a stream id). Used for per-trial and per-fold seeds.
RngSeed derive_seed(RngSeed parent, std::uint64_t stream);

/// Inputs that do not conform to a documented shape or precondition.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unusable input data (files, labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed (factorization, non-finite values, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slrff
