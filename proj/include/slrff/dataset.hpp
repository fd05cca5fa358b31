#pragma once

#include "slrff/types.hpp"

#include <filesystem>
#include <optional>
#include <string_view>

namespace slrff {

enum class DataFormat { LIBSVM, CSV };

std::optional<DataFormat> parse_format(std::string_view name);

/// Feature rows plus labels in {-1, +1}.
struct Dataset {
  Matrix features;
  Vector labels;
  /// Rows at or after this index form a given test partition.
  std::optional<Index> given_test_begin;

  Index size() const { return features.rows(); }
  Index dimension() const { return features.cols(); }
};

struct LoadOptions {
  /// LIBSVM: feature dimension; 0 infers the largest index seen.
  Index dimension = 0;
  /// CSV: column holding the label; negative counts from the end.
  int label_column = -1;
};

/// Reads LIBSVM ("label idx:val ...", 1-based indices) or CSV (comma
/// separated, optional header row; '#', '%' and '@' lines are skipped so
/// ARFF files load directly). Labels are mapped to {-1, +1}. Features are
/// returned unnormalized; see split().
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LoadOptions& options = {});

/// Concatenates a training and a test file and records the partition.
Dataset load_partitioned(const std::filesystem::path& train,
                         const std::filesystem::path& test, DataFormat format,
                         const LoadOptions& options = {});

/// Per-coordinate min-max scaling onto [0, 1]. Constant columns map to 0.
class MinMaxScaler {
 public:
  explicit MinMaxScaler(const Matrix& reference);
  Matrix transform(const Matrix& data) const;

 private:
  Eigen::RowVectorXd min_;
  Eigen::RowVectorXd range_;
};

enum class SplitPolicy { GivenPartition, RandomHalf };

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Splits and min-max normalizes both halves with training statistics.
/// RandomHalf puts floor(n/2) seeded-random rows in train.
TrainTest split(const Dataset& data, SplitPolicy policy, RngSeed seed,
                bool normalize = true);

/// Seeded subset of `count` distinct rows (all rows if count >= n).
std::vector<Index> subsample_rows(Index n, Index count, RngSeed seed);

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows);

}  // namespace slrff
