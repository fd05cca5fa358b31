#pragma once

#include "slrff/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace slrff {

enum class ReportFormat { CSV, JSONLines };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// Fixed CSV header.
inline constexpr std::string_view kCsvHeader =
    "method,s,trial,accuracy,rel_error,gen_time_s,solve_time_s,lambda";

struct SummaryRow {
  Method method;
  Index s;
  int trials;
  double accuracy_mean, accuracy_std;
  double rel_error_mean, rel_error_std;
  double gen_time_mean, gen_time_std;
  double solve_time_mean, solve_time_std;
};

/// Mean and sample standard deviation per (method, s), in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

void write_report(std::ostream& out, const std::vector<TrialRecord>& records,
                  ReportFormat format);

/// Writes the report to `path`. Throws DataError if the path is unwritable.
void emit_report(const std::vector<TrialRecord>& records,
                 const std::filesystem::path& path, ReportFormat format);

/// Parses a CSV report written by write_report; '#' lines are ignored.
std::vector<TrialRecord> read_report_csv(std::istream& in);

}  // namespace slrff

namespace slrff {

struct BoundReport;

/// Flat key=value rendering of a BoundReport, one field per line.
void write_bound_report(std::ostream& out, const BoundReport& report);

}  // namespace slrff
