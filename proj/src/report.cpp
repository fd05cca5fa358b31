#include "slrff/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace slrff {

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::CSV;
  if (name == "jsonl") return ReportFormat::JSONLines;
  return std::nullopt;
}

namespace {

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return r;
}

nlohmann::json to_json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<std::pair<Method, Index>> order;
  std::map<std::pair<Method, Index>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.method, r.s);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    std::vector<double> acc, err, gen, sol;
    for (const TrialRecord* r : g) {
      acc.push_back(r->accuracy);
      err.push_back(r->rel_error);
      gen.push_back(r->gen_time_s);
      sol.push_back(r->solve_time_s);
    }
    const auto a = mean_std(acc), e = mean_std(err), t = mean_std(gen), v = mean_std(sol);
    out.push_back({key.first, key.second, static_cast<int>(g.size()), a.mean, a.std,
                   e.mean, e.std, t.mean, t.std, v.mean, v.std});
  }
  return out;
}

void write_report(std::ostream& out, const std::vector<TrialRecord>& records,
                  ReportFormat format) {
  if (records.empty()) throw ShapeError("emit_report: no records");
  if (format == ReportFormat::JSONLines) {
    for (const auto& r : records) {
      nlohmann::ordered_json j;
      j["method"] = to_string(r.method);
      j["s"] = r.s;
      j["trial"] = r.trial;
      j["accuracy"] = to_json_number(r.accuracy);
      j["rel_error"] = to_json_number(r.rel_error);
      j["gen_time_s"] = to_json_number(r.gen_time_s);
      j["solve_time_s"] = to_json_number(r.solve_time_s);
      j["lambda"] = to_json_number(r.lambda);
      out << j.dump() << '\n';
    }
    return;
  }
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.s << ',' << r.trial << ',' << fmt9(r.accuracy)
        << ',' << fmt9(r.rel_error) << ',' << fmt9(r.gen_time_s) << ','
        << fmt9(r.solve_time_s) << ',' << fmt9(r.lambda) << '\n';
  }
  for (const auto& s : summarize(records)) {
    out << "# summary method=" << to_string(s.method) << " s=" << s.s
        << " trials=" << s.trials << " accuracy=" << fmt9(s.accuracy_mean) << "+-"
        << fmt9(s.accuracy_std) << " rel_error=" << fmt9(s.rel_error_mean) << "+-"
        << fmt9(s.rel_error_std) << " gen_time_s=" << fmt9(s.gen_time_mean) << "+-"
        << fmt9(s.gen_time_std) << " solve_time_s=" << fmt9(s.solve_time_mean) << "+-"
        << fmt9(s.solve_time_std) << '\n';
  }
}

void emit_report(const std::vector<TrialRecord>& records,
                 const std::filesystem::path& path, ReportFormat format) {
  if (records.empty()) throw ShapeError("emit_report: no records");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write report to " + path.string());
  write_report(out, records, format);
  if (!out) throw DataError("failed writing report to " + path.string());
}

std::vector<TrialRecord> read_report_csv(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      if (line != kCsvHeader) throw DataError("report: unexpected CSV header");
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 8) throw DataError("report: expected 8 fields in '" + line + "'");
    const auto method = parse_method(f[0]);
    if (!method) throw DataError("report: unknown method '" + f[0] + "'");
    auto num = [](const std::string& s) { return std::stod(s); };
    TrialRecord r;
    r.method = *method;
    r.s = std::stoll(f[1]);
    r.trial = std::stoi(f[2]);
    r.accuracy = num(f[3]);
    r.rel_error = num(f[4]);
    r.gen_time_s = num(f[5]);
    r.solve_time_s = num(f[6]);
    r.lambda = num(f[7]);
    out.push_back(r);
  }
  return out;
}

}  // namespace slrff

#include "slrff/theory.hpp"

namespace slrff {

void write_bound_report(std::ostream& out, const BoundReport& r) {
  out << "n=" << r.n << '\n'
      << "lambda=" << fmt9(r.lambda) << '\n'
      << "lambda_star=" << fmt9(r.lambda_star) << '\n'
      << "delta=" << fmt9(r.delta) << '\n'
      << "lambda_max=" << fmt9(r.lambda_max) << '\n'
      << "d_K=" << fmt9(r.dof) << '\n'
      << "D_K=" << fmt9(r.surrogate_dof) << '\n'
      << "m=" << fmt9(r.m) << '\n'
      << "L_sup=" << (r.l_sup ? fmt9(*r.l_sup) : std::string("nan")) << '\n'
      << "s_required_surrogate=" << fmt9(r.s_required_surrogate) << '\n'
      << "s_required_erls=" << fmt9(r.s_required_erls) << '\n'
      << "s_required_two_stage="
      << (r.s_required_two_stage ? fmt9(*r.s_required_two_stage) : std::string("nan"))
      << '\n'
      << "decay_regime=" << to_string(r.decay.kind) << '\n'
      << "decay_t=" << fmt9(r.decay.t) << '\n'
      << "decay_rate=" << fmt9(r.decay.rate) << '\n'
      << "decay_r_squared=" << fmt9(r.decay.r_squared) << '\n';
  if (r.asymptotic) {
    out << "asymptotic_order_erls=" << fmt9(r.asymptotic->erls) << '\n'
        << "asymptotic_order_surrogate=" << fmt9(r.asymptotic->surrogate) << '\n';
  }
  for (const auto& w : r.warnings) out << "# warning: " << w << '\n';
}

}  // namespace slrff
