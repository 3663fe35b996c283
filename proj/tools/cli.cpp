#include "cli.hpp"

#include "criteria.hpp"
#include "fluidair/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fluidair {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> method;
  std::optional<int> trials;
  std::optional<int> threads;
  std::vector<std::string> sets;
};

struct TraceArgs {
  int antennas = 10;
  int users = 100;
  double snr_db = -10.0;
  std::string method = "pdip";
  std::uint64_t seed = 1;
  int trials = 1;
  int max_rounds = 100;
  std::string out;
};

struct CheckArgs {
  bool full = false;
  int threads = 1;
  std::string csv_dir;
};

/// Writes the sweep to config.out (stdout when empty or "-").
int write_sweep(const ExperimentConfig& config, std::ostream& out,
                std::ostream& err) {
  config.validate();
  if (config.out.empty() || config.out == "-") {
    run_sweep(config, &out);
    return 0;
  }
  const std::string path = resolve_output_path(config.out);
  std::ofstream file(path);
  if (!file) {
    err << "error: cannot open output file " << path << '\n';
    return 1;
  }
  run_sweep(config, &file);
  err << "wrote " << path << '\n';
  return 0;
}

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = ExperimentConfig::load(a.config);
  for (const std::string& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed) config.base_seed = *a.seed;
  if (a.out) config.out = *a.out;
  if (a.method) config.set("methods", *a.method);
  if (a.trials) config.trials = *a.trials;
  if (a.threads) config.threads = *a.threads;
  return write_sweep(config, out, err);
}

int do_trace(const TraceArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  config.axis = SweepAxis::kTrace;
  config.scenario.antennas = a.antennas;
  config.scenario.users = a.users;
  config.scenario.snr_db = a.snr_db;
  config.set("methods", a.method);
  config.base_seed = a.seed;
  config.trials = a.trials;
  config.ao.max_rounds = a.max_rounds;
  config.out = a.out;
  return write_sweep(config, out, err);
}

int do_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  checks::CheckOptions options;
  options.quick = !a.full;
  options.threads = a.threads;
  options.csv_dir = a.csv_dir;
  options.progress = &err;
  int failed = 0;
  for (const checks::CriterionResult& r : checks::run_all(options)) {
    out << checks::format_result(r) << '\n';
    if (!r.passed) ++failed;
  }
  out.flush();
  return failed == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Antenna-position and transceiver optimisation for "
               "over-the-air computation"};
  app.name("fluidair");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a sweep described by a config file");
  run->add_option("-c,--config", run_args.config, "key = value config file")
      ->required();
  run->add_option("--seed", run_args.seed, "base seed (trial t uses seed + t)");
  run->add_option("-o,--out", run_args.out, "CSV path, '-' for stdout");
  run->add_option("-m,--method", run_args.method,
                  "comma-separated subset of pdip,sca,pgd,fpa");
  run->add_option("--trials", run_args.trials, "trials per axis value")
      ->check(CLI::PositiveNumber);
  run->add_option("--threads", run_args.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  run->add_option("--set", run_args.sets, "override a config key (key=value)");

  TraceArgs trace_args;
  auto* trace =
      app.add_subcommand("trace", "per-round MSE trace on sampled scenarios");
  trace->add_option("--N", trace_args.antennas, "antennas")
      ->check(CLI::PositiveNumber);
  trace->add_option("--K", trace_args.users, "users")->check(CLI::PositiveNumber);
  trace->add_option("--snr-db", trace_args.snr_db, "SNR in dB");
  trace->add_option("-m,--method", trace_args.method,
                    "comma-separated subset of pdip,sca,pgd,fpa");
  trace->add_option("--seed", trace_args.seed, "scenario seed");
  trace->add_option("--trials", trace_args.trials, "scenarios (seed, seed + 1, ...)")
      ->check(CLI::PositiveNumber);
  trace->add_option("--max-rounds", trace_args.max_rounds, "AO round cap")
      ->check(CLI::PositiveNumber);
  trace->add_option("-o,--out", trace_args.out, "CSV path, '-' for stdout");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "oracle and invariant checks");
  check->add_flag("--full", check_args.full,
                  "full acceptance sizes including the trend sweeps");
  check->add_option("--threads", check_args.threads, "sweep worker threads")
      ->check(CLI::PositiveNumber);
  check->add_option("--csv-dir", check_args.csv_dir, "write sweep CSVs here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return do_run(run_args, out, err);
    if (*trace) return do_trace(trace_args, out, err);
    return do_check(check_args, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fluidair
