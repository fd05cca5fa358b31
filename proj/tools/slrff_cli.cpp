// Command-line front end: approximation-error curves, timing, accuracy
// tables, theoretical bounds and standalone lambda selection.

#include "slrff/dataset.hpp"
#include "slrff/experiment.hpp"
#include "slrff/krr.hpp"
#include "slrff/leverage.hpp"
#include "slrff/report.hpp"
#include "slrff/theory.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string data;
  std::string test_data;
  std::string format = "libsvm";
  std::string methods = "SurrogateRFF";
  std::string s_mult = "1,2,4,8,16,32,64,128";
  double pool_mult = 1.0;
  double sigma = 1.0;
  std::string lambda_grid = "0.05,0.1,0.5,1";
  int folds = 5;
  int trials = 10;
  std::uint64_t seed = 0;
  long long err_subsample = 1000;
  std::string variant = "simplified";
  std::string out;
  std::string emit = "csv";
  int threads = 1;
  double delta = 0.5;
  std::string split = "random-half";
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw slrff::ShapeError(std::string("--") + what + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw slrff::ShapeError(std::string("--") + what + ": empty list");
  return out;
}

slrff::ExperimentConfig make_config(const Options& o, slrff::ExperimentMode mode) {
  slrff::ExperimentConfig c;
  c.methods.clear();
  for (const auto& name : split_list(o.methods)) {
    const auto m = slrff::parse_method(name);
    if (!m) {
      throw slrff::ShapeError("--method: unknown method '" + name +
                              "' (RFF, QMC, LeverageRFF, SurrogateRFF)");
    }
    c.methods.push_back(*m);
  }
  c.s_multipliers = parse_doubles(o.s_mult, "s-mult");
  c.pool_multiplier = o.pool_mult;
  c.sigma = o.sigma;
  c.lambda_grid = parse_doubles(o.lambda_grid, "lambda-grid");
  c.folds = o.folds;
  c.trials = o.trials;
  c.seed = o.seed;
  c.error_subsample = static_cast<slrff::Index>(o.err_subsample);
  if (o.variant == "simplified") {
    c.variant = slrff::SurrogateVariant::Simplified;
  } else if (o.variant == "full") {
    c.variant = slrff::SurrogateVariant::Full;
  } else {
    throw slrff::ShapeError("--variant must be full or simplified");
  }
  if (o.split == "random-half") {
    c.split_policy = slrff::SplitPolicy::RandomHalf;
  } else if (o.split == "given") {
    c.split_policy = slrff::SplitPolicy::GivenPartition;
  } else {
    throw slrff::ShapeError("--split must be random-half or given");
  }
  c.threads = o.threads;
  c.mode = mode;
  c.validate();
  return c;
}

slrff::Dataset load(const Options& o) {
  if (o.data.empty()) throw slrff::ShapeError("--data is required");
  const auto fmt = slrff::parse_format(o.format);
  if (!fmt) throw slrff::ShapeError("--format must be libsvm or csv");
  if (!o.test_data.empty()) return slrff::load_partitioned(o.data, o.test_data, *fmt);
  return slrff::load_dataset(o.data, *fmt);
}

slrff::ReportFormat report_format(const Options& o) {
  const auto f = slrff::parse_report_format(o.emit);
  if (!f) throw slrff::ShapeError("--emit must be csv or jsonl");
  return *f;
}

void emit(const Options& o, const std::vector<slrff::TrialRecord>& records) {
  const auto fmt = report_format(o);
  if (o.out.empty()) {
    slrff::write_report(std::cout, records, fmt);
  } else {
    slrff::emit_report(records, o.out, fmt);
  }
}

int run_experiment_command(const Options& o, slrff::ExperimentMode mode) {
  const auto config = make_config(o, mode);
  report_format(o);
  const slrff::Dataset data = load(o);
  const auto records = slrff::run_experiment(config, data, [](const slrff::TrialRecord& r) {
    std::cerr << to_string(r.method) << " s=" << r.s << " trial=" << r.trial
              << " acc=" << r.accuracy << " err=" << r.rel_error
              << " gen=" << r.gen_time_s << "s\n";
  });
  emit(o, records);
  return 0;
}

int run_bounds(const Options& o) {
  const auto config = make_config(o, slrff::ExperimentMode::Full);
  const slrff::Dataset data = load(o);
  const auto tt = slrff::split(data, config.split_policy, slrff::RngSeed{config.seed});
  const slrff::Index cap = std::min<slrff::Index>(
      config.error_subsample > 0 ? config.error_subsample : 1000, slrff::kExactCap);
  const auto rows = slrff::subsample_rows(tt.train.size(), cap, slrff::RngSeed{config.seed});
  const slrff::Dataset sub = slrff::take_rows(tt.train, rows);
  const slrff::KernelSpec kernel(config.sigma);
  const slrff::KernelMatrix k = slrff::kernel_matrix(sub.features, kernel);
  const slrff::Index s = slrff::feature_count(config.s_multipliers.front(), sub.dimension());

  std::ostringstream text;
  for (double lambda : config.lambda_grid) {
    slrff::BoundReport report = slrff::required_features(
        k, sub.labels, lambda, o.delta, slrff::BoundOptions{std::nullopt, s});
    // L_sup over an MC pool of s frequencies scored both ways.
    const auto pool = slrff::sample_mc(slrff::spectral_density(kernel, sub.dimension()), s,
                                       slrff::RngSeed{config.seed});
    const auto z = slrff::feature_map(sub.features, pool);
    const slrff::Vector ones = slrff::Vector::Ones(s);
    const auto exact =
        slrff::exact_leverage(slrff::RegularizedKernelFactor(k, lambda), z, ones);
    const auto surrogate = slrff::surrogate_leverage(sub.labels, z, ones, lambda, false);
    report.l_sup = slrff::leverage_ratio_sup(exact, surrogate, surrogate.normalizer);
    text << "[bounds]\n";
    slrff::write_bound_report(text, report);
  }
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw slrff::DataError("cannot write " + o.out);
    f << text.str();
  }
  return 0;
}

int run_cv(const Options& o) {
  const auto config = make_config(o, slrff::ExperimentMode::Full);
  const slrff::Dataset data = load(o);
  const auto tt = slrff::split(data, config.split_policy, slrff::RngSeed{config.seed});
  std::ostringstream text;
  text << "method,s,lambda,mean_accuracy,chosen\n";
  for (slrff::Method m : config.methods) {
    for (double mult : config.s_multipliers) {
      slrff::SamplerConfig sampler;
      sampler.method = m;
      sampler.kernel = slrff::KernelSpec(config.sigma);
      sampler.target = slrff::feature_count(mult, data.dimension());
      sampler.pool_multiplier = config.pool_multiplier;
      sampler.variant = config.variant;
      const auto report = slrff::cross_validate(tt.train.features, tt.train.labels, sampler,
                                                config.lambda_grid, config.folds,
                                                slrff::RngSeed{config.seed});
      for (std::size_t g = 0; g < report.lambda_grid.size(); ++g) {
        text << to_string(m) << ',' << sampler.target << ',' << report.lambda_grid[g] << ','
             << report.mean_accuracy[g] << ','
             << (report.lambda_grid[g] == report.chosen_lambda ? 1 : 0) << '\n';
      }
    }
  }
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw slrff::DataError("cannot write " + o.out);
    f << text.str();
  }
  return 0;
}

// Comma lists arrive split when read from a config file; join them back.
void add_list(CLI::App* cmd, const std::string& flag, std::string& target,
              const std::string& help) {
  cmd->add_option_function<std::vector<std::string>>(
         flag,
         [&target](const std::vector<std::string>& parts) {
           std::string joined;
           for (const auto& p : parts) joined += (joined.empty() ? "" : ",") + p;
           target = joined;
         },
         help + " [default: " + target + "]")
      ->delimiter(',');
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Dataset file (training file with --test-data)");
  cmd->add_option("--test-data", o.test_data, "Given test partition file");
  cmd->add_option("--format", o.format, "libsvm or csv")->capture_default_str();
  add_list(cmd, "--method", o.methods, "Comma list of RFF, QMC, LeverageRFF, SurrogateRFF");
  add_list(cmd, "--s-mult", o.s_mult, "Comma list of multipliers of d");
  cmd->add_option("--pool-mult", o.pool_mult, "Pool size l as a multiple of s")
      ->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "Gaussian bandwidth")->capture_default_str();
  add_list(cmd, "--lambda-grid", o.lambda_grid, "Comma list of lambda values");
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Repetitions")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  cmd->add_option("--err-subsample", o.err_subsample,
                  "Points used for the relative kernel error (0 disables)")
      ->capture_default_str();
  cmd->add_option("--variant", o.variant, "Surrogate variant: full or simplified")
      ->capture_default_str();
  cmd->add_option("--split", o.split, "random-half or given")->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (stdout when empty)");
  cmd->add_option("--emit", o.emit, "csv or jsonl")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Concurrent trials")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate leverage weighted random Fourier features"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto* approx = app.add_subcommand("approx", "Relative kernel approximation error vs s");
  auto* bench = app.add_subcommand("bench", "Feature-generation time vs s (single-threaded)");
  auto* krr = app.add_subcommand("krr", "Test accuracy and timing table");
  auto* bounds = app.add_subcommand("bounds", "Theoretical feature-count diagnostics");
  auto* cv = app.add_subcommand("cv", "Cross-validated lambda selection");
  for (auto* cmd : {approx, bench, krr, bounds, cv}) add_common(cmd, o);
  bounds->add_option("--delta", o.delta, "Failure probability in (0,1)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (approx->parsed()) return run_experiment_command(o, slrff::ExperimentMode::ApproxOnly);
    if (bench->parsed()) return run_experiment_command(o, slrff::ExperimentMode::TimingOnly);
    if (krr->parsed()) return run_experiment_command(o, slrff::ExperimentMode::Full);
    if (bounds->parsed()) return run_bounds(o);
    if (cv->parsed()) return run_cv(o);
  } catch (const slrff::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const slrff::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
