#include "oracles.hpp"

#include "slrff/dataset.hpp"
#include "slrff/experiment.hpp"
#include "slrff/report.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace slrff;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "slrff_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name);
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset blobs(Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.08);
  Dataset d;
  d.features.resize(n, 2);
  d.labels.resize(n);
  for (Index i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    d.features(i, 0) = (pos ? 0.25 : 0.75) + noise(rng);
    d.features(i, 1) = (pos ? 0.25 : 0.75) + noise(rng);
    d.labels(i) = pos ? 1.0 : -1.0;
  }
  return d;
}

}  // namespace

TEST_CASE("LIBSVM loading") {
  const auto p = write_file("one.libsvm", "1 1:0.5 3:2.0\n-1 2:1\n");
  const Dataset d = load_dataset(p, DataFormat::LIBSVM, LoadOptions{3, -1});
  REQUIRE(d.size() == 2);
  REQUIRE(d.dimension() == 3);
  CHECK(d.features(0, 0) == 0.5);
  CHECK(d.features(0, 1) == 0.0);
  CHECK(d.features(0, 2) == 2.0);
  CHECK(d.features(1, 1) == 1.0);
  CHECK(d.labels(0) == 1.0);
  CHECK(d.labels(1) == -1.0);
  CHECK(load_dataset(p, DataFormat::LIBSVM).dimension() == 3);
  CHECK(load_dataset(p, DataFormat::LIBSVM, LoadOptions{5, -1}).dimension() == 5);
  CHECK_THROWS_AS(load_dataset(p, DataFormat::LIBSVM, LoadOptions{2, -1}), DataError);
}

TEST_CASE("loader errors") {
  const auto bad = write_file("bad.libsvm", "1 1:0.5\n-1 2:x\n");
  try {
    load_dataset(bad, DataFormat::LIBSVM);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  const auto three = write_file("three.libsvm", "1 1:0\n2 1:1\n3 1:2\n");
  CHECK_THROWS_AS(load_dataset(three, DataFormat::LIBSVM), DataError);
  CHECK_THROWS_AS(load_dataset(scratch("missing.csv"), DataFormat::CSV), DataError);
  const auto empty = write_file("empty.csv", "# nothing\n");
  CHECK_THROWS_AS(load_dataset(empty, DataFormat::CSV), DataError);
}

TEST_CASE("CSV and ARFF loading") {
  const auto csv = write_file("h.csv", "a,b,label\n0.1,2,0\n0.3,4,1\n0.2,3,1\n");
  const Dataset d = load_dataset(csv, DataFormat::CSV);
  REQUIRE(d.size() == 3);
  REQUIRE(d.dimension() == 2);
  CHECK(d.features(1, 1) == 4.0);
  CHECK(d.labels(0) == -1.0);
  CHECK(d.labels(1) == 1.0);

  const auto first = write_file("first.csv", "5,0.1,0.2\n7,0.3,0.4\n");
  const Dataset f = load_dataset(first, DataFormat::CSV, LoadOptions{0, 0});
  CHECK(f.dimension() == 2);
  CHECK(f.features(1, 0) == 0.3);
  CHECK(f.labels(0) == -1.0);

  const auto arff = write_file("x.arff",
                               "@RELATION r\n% comment\n@ATTRIBUTE a NUMERIC\n"
                               "@ATTRIBUTE c {0,1}\n@DATA\n1.5,0\n2.5,1\n");
  const Dataset a = load_dataset(arff, DataFormat::CSV);
  CHECK(a.size() == 2);
  CHECK(a.features(1, 0) == 2.5);
}

TEST_CASE("normalization") {
  Matrix x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  const MinMaxScaler scaler(x);
  const Matrix t = scaler.transform(x);
  CHECK(t(0, 0) == 0.0);
  CHECK(t(1, 0) == 0.5);
  CHECK(t(2, 0) == 1.0);
  CHECK(t.col(1).isZero(0.0));
}

TEST_CASE("split") {
  Dataset d;
  d.features = (Matrix(4, 1) << 0, 1, 2, 3).finished();
  d.labels = (Vector(4) << 1, -1, 1, -1).finished();
  const TrainTest a = split(d, SplitPolicy::RandomHalf, RngSeed{9}, false);
  CHECK(a.train.size() == 2);
  CHECK(a.test.size() == 2);
  std::set<double> seen;
  for (Index i = 0; i < 2; ++i) {
    seen.insert(a.train.features(i, 0));
    seen.insert(a.test.features(i, 0));
  }
  CHECK(seen.size() == 4);
  const TrainTest b = split(d, SplitPolicy::RandomHalf, RngSeed{9}, false);
  CHECK(a.train.features == b.train.features);
  CHECK(a.test.labels == b.test.labels);
  CHECK_THROWS_AS(split(d, SplitPolicy::GivenPartition, RngSeed{9}), ShapeError);

  Dataset odd = d;
  odd.features = (Matrix(5, 1) << 0, 1, 2, 3, 4).finished();
  odd.labels = Vector::Ones(5);
  CHECK(split(odd, SplitPolicy::RandomHalf, RngSeed{1}).train.size() == 2);

  d.given_test_begin = 3;
  const TrainTest g = split(d, SplitPolicy::GivenPartition, RngSeed{0});
  CHECK(g.train.size() == 3);
  CHECK(g.test.size() == 1);
  // Train statistics map the held-out row 3 beyond [0, 1].
  CHECK(g.test.features(0, 0) == doctest::Approx(1.5));
  CHECK(g.train.features.maxCoeff() == 1.0);

  const auto tr = write_file("p_train.csv", "0.1,1\n0.3,0\n");
  const auto te = write_file("p_test.csv", "0.2,1\n");
  const Dataset p = load_partitioned(tr, te, DataFormat::CSV);
  CHECK(p.size() == 3);
  REQUIRE(p.given_test_begin.has_value());
  CHECK(*p.given_test_begin == 2);
}

TEST_CASE("subsample_rows") {
  const auto r = subsample_rows(50, 10, RngSeed{3});
  CHECK(r.size() == 10);
  CHECK(std::set<Index>(r.begin(), r.end()).size() == 10);
  CHECK(r == subsample_rows(50, 10, RngSeed{3}));
  CHECK(subsample_rows(5, 10, RngSeed{3}).size() == 5);
}

TEST_CASE("run_experiment on separable blobs") {
  const Dataset data = blobs(100, 17);
  ExperimentConfig c;
  c.methods = {Method::RFF, Method::QMC, Method::LeverageRFF, Method::SurrogateRFF};
  c.s_multipliers = {1.0, 2.0};
  c.trials = 2;
  c.folds = 3;
  c.error_subsample = 30;
  c.seed = 5;
  int seen = 0;
  const auto records = run_experiment(c, data, [&](const TrialRecord&) { ++seen; });
  CHECK(records.size() == 16);
  CHECK(seen == 16);
  for (const auto& r : records) {
    CHECK(r.accuracy > 0.5);
    CHECK(r.rel_error >= 0.0);
    CHECK(r.gen_time_s >= 0.0);
    CHECK(r.s == (r.s == 2 ? 2 : 4));
  }
  CHECK(records.front().method == Method::RFF);
  CHECK(records.back().method == Method::SurrogateRFF);

  c.threads = 3;
  const auto again = run_experiment(c, data);
  REQUIRE(again.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].accuracy == records[i].accuracy);
    CHECK(again[i].rel_error == records[i].rel_error);
    CHECK(again[i].lambda == records[i].lambda);
  }

  c.mode = ExperimentMode::ApproxOnly;
  for (const auto& r : run_experiment(c, data)) {
    CHECK(std::isnan(r.accuracy));
    CHECK_FALSE(std::isnan(r.rel_error));
  }
  c.mode = ExperimentMode::TimingOnly;
  for (const auto& r : run_experiment(c, data)) {
    CHECK(std::isnan(r.rel_error));
    CHECK(r.gen_time_s >= 0.0);
  }
  c.trials = 0;
  CHECK_THROWS_AS(run_experiment(c, data), ShapeError);
}

TEST_CASE("timer brackets exactly the generation phases") {
  const Dataset data = blobs(60, 3);
  SamplerConfig sampler;
  sampler.method = Method::SurrogateRFF;
  sampler.target = 8;
  sampler.pool_multiplier = 4.0;
  std::vector<std::chrono::steady_clock::time_point> marks;
  std::vector<std::string> phases;
  PipelineHooks hooks;
  hooks.on_phase = [&](std::string_view phase, bool entering) {
    marks.push_back(std::chrono::steady_clock::now());
    if (entering) phases.emplace_back(phase);
  };
  const TimedFeatures t =
      time_feature_generation(data.features, data.labels, sampler, 0.1, RngSeed{1}, hooks);
  REQUIRE_FALSE(marks.empty());
  CHECK(t.started <= marks.front());
  CHECK(marks.back() <= t.stopped);
  CHECK(t.seconds == doctest::Approx(
                         std::chrono::duration<double>(t.stopped - t.started).count()));
  CHECK(phases == std::vector<std::string>{"sample", "features", "scores", "resample", "gather"});
  CHECK(t.features.train_features.rows() == 60);
  CHECK(t.features.train_features.entries.cols() == 16);
}

TEST_CASE("reports") {
  TrialRecord r;
  r.method = Method::SurrogateRFF;
  r.s = 28;
  r.trial = 0;
  r.accuracy = 0.9036123456789;
  r.rel_error = 0.123456789012;
  r.gen_time_s = 0.5;
  r.solve_time_s = 0.25;
  r.lambda = 0.1;

  const auto path = scratch("one.csv");
  emit_report({r}, path, ReportFormat::CSV);
  const std::string text = slurp(path);
  std::istringstream lines(text);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 3);
  CHECK(all[0] == kCsvHeader);
  CHECK(all[1].rfind("SurrogateRFF,28,0,", 0) == 0);
  CHECK(all[2].rfind("# summary method=SurrogateRFF s=28 trials=1", 0) == 0);

  emit_report({r}, path, ReportFormat::CSV);
  CHECK(slurp(path) == text);

  std::istringstream back(text);
  const auto parsed = read_report_csv(back);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].method == r.method);
  CHECK(parsed[0].s == r.s);
  CHECK(std::abs(parsed[0].accuracy - r.accuracy) <= 1e-8 * r.accuracy);
  CHECK(std::abs(parsed[0].rel_error - r.rel_error) <= 1e-8 * r.rel_error);
  CHECK(parsed[0].lambda == r.lambda);

  TrialRecord unmeasured = r;
  unmeasured.trial = 1;
  unmeasured.accuracy = std::numeric_limits<double>::quiet_NaN();
  const auto jpath = scratch("one.jsonl");
  emit_report({r, unmeasured}, jpath, ReportFormat::JSONLines);
  std::ifstream jin(jpath);
  std::getline(jin, line);
  const auto j0 = nlohmann::json::parse(line);
  CHECK(j0.at("method") == "SurrogateRFF");
  CHECK(j0.at("s") == 28);
  CHECK(j0.at("accuracy").get<double>() == doctest::Approx(r.accuracy));
  std::getline(jin, line);
  CHECK(nlohmann::json::parse(line).at("accuracy").is_null());

  CHECK_THROWS_AS(emit_report({r}, scratch("no_such_dir") / "x" / "y.csv", ReportFormat::CSV),
                  DataError);

  const auto rows = summarize({r, unmeasured});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].trials == 2);
}
