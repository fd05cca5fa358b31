#include "slrff/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace slrff {

std::optional<DataFormat> parse_format(std::string_view name) {
  if (name == "libsvm" || name == "LIBSVM") return DataFormat::LIBSVM;
  if (name == "csv" || name == "CSV") return DataFormat::CSV;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

Vector map_labels(const std::vector<double>& raw, const std::filesystem::path& path) {
  std::set<double> distinct(raw.begin(), raw.end());
  if (distinct.size() > 2) {
    throw DataError(path.string() + ": non-binary labels (" +
                    std::to_string(distinct.size()) + " distinct values)");
  }
  const bool already_signed =
      std::all_of(distinct.begin(), distinct.end(),
                  [](double v) { return v == -1.0 || v == 1.0; });
  Vector out(static_cast<Index>(raw.size()));
  const double lo = distinct.empty() ? 0.0 : *distinct.begin();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double y;
    if (already_signed) {
      y = raw[i];
    } else if (distinct.size() == 2) {
      y = raw[i] == lo ? -1.0 : 1.0;
    } else {
      y = raw[i] > 0.0 ? 1.0 : -1.0;
    }
    out(static_cast<Index>(i)) = y;
  }
  return out;
}

struct RawRows {
  std::vector<std::vector<std::pair<Index, double>>> sparse;
  std::vector<double> labels;
  Index max_index = 0;
};

Dataset load_libsvm(const std::filesystem::path& path, std::istream& in,
                    const LoadOptions& options) {
  RawRows raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    std::istringstream tokens{std::string(view)};
    std::string token;
    tokens >> token;
    const auto label = parse_double(token);
    if (!label) malformed(path, line_no, "bad label '" + token + "'");
    std::vector<std::pair<Index, double>> row;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        malformed(path, line_no, "expected index:value, got '" + token + "'");
      }
      const auto idx = parse_double(std::string_view(token).substr(0, colon));
      const auto val = parse_double(std::string_view(token).substr(colon + 1));
      if (!idx || !val || *idx < 1 || std::floor(*idx) != *idx) {
        malformed(path, line_no, "bad feature '" + token + "'");
      }
      const auto k = static_cast<Index>(*idx);
      raw.max_index = std::max(raw.max_index, k);
      row.emplace_back(k - 1, *val);
    }
    raw.sparse.push_back(std::move(row));
    raw.labels.push_back(*label);
  }
  if (raw.sparse.empty()) throw DataError(path.string() + ": no data rows");
  const Index d = options.dimension > 0 ? options.dimension : raw.max_index;
  if (raw.max_index > d) {
    throw DataError(path.string() + ": feature index " + std::to_string(raw.max_index) +
                    " exceeds dimension " + std::to_string(d));
  }
  Dataset out;
  out.features = Matrix::Zero(static_cast<Index>(raw.sparse.size()), d);
  for (std::size_t i = 0; i < raw.sparse.size(); ++i) {
    for (const auto& [k, v] : raw.sparse[i]) out.features(static_cast<Index>(i), k) = v;
  }
  out.labels = map_labels(raw.labels, path);
  return out;
}

Dataset load_csv(const std::filesystem::path& path, std::istream& in,
                 const LoadOptions& options) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool seen_first = false;
  std::map<std::string, double, std::less<>> class_codes;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#' || view.front() == '%' ||
        view.front() == '@') {
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(view.substr(start, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() < 2) malformed(path, line_no, "need at least one feature and a label");
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      malformed(path, line_no, "expected " + std::to_string(width) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    const int w = static_cast<int>(width);
    const int lc = options.label_column < 0 ? w + options.label_column : options.label_column;
    if (lc < 0 || lc >= w) malformed(path, line_no, "label column out of range");
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (int k = 0; k < w; ++k) {
      if (k == lc) continue;
      const auto v = parse_double(fields[static_cast<std::size_t>(k)]);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (!seen_first) {  // header row
        seen_first = true;
        width = 0;
        continue;
      }
      malformed(path, line_no, "non-numeric field");
    }
    seen_first = true;
    // Class names such as "g"/"h" get codes in order of first appearance.
    const std::string_view label_field = trim(fields[static_cast<std::size_t>(lc)]);
    if (const auto v = parse_double(label_field)) {
      labels.push_back(*v);
    } else {
      const auto [it, inserted] = class_codes.try_emplace(
          std::string(label_field), static_cast<double>(class_codes.size()));
      labels.push_back(it->second);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError(path.string() + ": no data rows");
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      out.features(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
    }
  }
  out.labels = map_labels(labels, path);
  return out;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return format == DataFormat::LIBSVM ? load_libsvm(path, in, options)
                                      : load_csv(path, in, options);
}

Dataset load_partitioned(const std::filesystem::path& train,
                         const std::filesystem::path& test, DataFormat format,
                         const LoadOptions& options) {
  Dataset a = load_dataset(train, format, options);
  LoadOptions test_options = options;
  if (format == DataFormat::LIBSVM) test_options.dimension = a.dimension();
  Dataset b = load_dataset(test, format, test_options);
  if (a.dimension() != b.dimension()) {
    throw DataError("training and test files differ in dimension");
  }
  Dataset out;
  out.features.resize(a.size() + b.size(), a.dimension());
  out.features << a.features, b.features;
  out.labels.resize(a.size() + b.size());
  out.labels << a.labels, b.labels;
  out.given_test_begin = a.size();
  return out;
}

MinMaxScaler::MinMaxScaler(const Matrix& reference) {
  if (reference.rows() < 1) throw ShapeError("MinMaxScaler: empty reference");
  min_ = reference.colwise().minCoeff();
  range_ = reference.colwise().maxCoeff() - min_;
}

Matrix MinMaxScaler::transform(const Matrix& data) const {
  if (data.cols() != min_.size()) throw ShapeError("MinMaxScaler: dimension mismatch");
  Matrix out(data.rows(), data.cols());
  for (Index k = 0; k < data.cols(); ++k) {
    if (range_(k) > 0.0) {
      out.col(k) = (data.col(k).array() - min_(k)) / range_(k);
    } else {
      out.col(k).setZero();
    }
  }
  return out;
}

std::vector<Index> subsample_rows(Index n, Index count, RngSeed seed) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  if (count >= n) return perm;
  std::mt19937_64 rng(seed.value);
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(static_cast<std::size_t>(count));
  std::sort(perm.begin(), perm.end());
  return perm;
}

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows) {
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), data.dimension());
  out.labels.resize(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.features.row(static_cast<Index>(k)) = data.features.row(rows[k]);
    out.labels(static_cast<Index>(k)) = data.labels(rows[k]);
  }
  return out;
}

TrainTest split(const Dataset& data, SplitPolicy policy, RngSeed seed,
                bool normalize) {
  const Index n = data.size();
  if (n < 2) throw ShapeError("split: need at least 2 rows");
  std::vector<Index> train_rows, test_rows;
  if (policy == SplitPolicy::GivenPartition) {
    if (!data.given_test_begin) {
      throw ShapeError("split: GivenPartition requested but the dataset has no partition");
    }
    const Index b = *data.given_test_begin;
    if (b < 1 || b >= n) throw ShapeError("split: given partition is empty on one side");
    for (Index i = 0; i < n; ++i) (i < b ? train_rows : test_rows).push_back(i);
  } else {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed.value);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto half = static_cast<std::size_t>(n / 2);
    train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
    test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
  }
  TrainTest out{take_rows(data, train_rows), take_rows(data, test_rows)};
  if (normalize) {
    const MinMaxScaler scaler(out.train.features);
    out.train.features = scaler.transform(out.train.features);
    out.test.features = scaler.transform(out.test.features);
  }
  return out;
}

}  // namespace slrff
