#include "fluidair/experiment.hpp"

#include <gtest/gtest.h>

#include <clocale>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace fluidair {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.axis = SweepAxis::kSnr;
  c.values = {-10.0, 10.0};
  c.scenario.antennas = 3;
  c.scenario.users = 3;
  c.trials = 2;
  c.ao.max_rounds = 15;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in(
      "# comment line\n"
      "axis = N\n"
      "values = 5, 10,15   # trailing comment\n"
      "K = 7\n"
      "snr_db = -5\n"
      "methods = pdip, FPA\n"
      "trials = 3\n"
      "seed = 42\n"
      "out = result.csv\n"
      "threads = 2\n"
      "pdip.xi = 20\n"
      "sca.max_outer = 50\n"
      "\n");
  const ExperimentConfig c = ExperimentConfig::parse(in);
  EXPECT_EQ(c.axis, SweepAxis::kAntennas);
  EXPECT_EQ(c.values, (std::vector<double>{5, 10, 15}));
  EXPECT_EQ(c.scenario.users, 7);
  EXPECT_EQ(c.scenario.snr_db, -5.0);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::kPdip, Method::kFpa}));
  EXPECT_EQ(c.trials, 3);
  EXPECT_EQ(c.base_seed, 42u);
  EXPECT_EQ(c.out, "result.csv");
  EXPECT_EQ(c.threads, 2);
  EXPECT_EQ(c.ao.pdip.xi, 20.0);
  EXPECT_EQ(c.ao.sca.max_outer, 50);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, RejectsMalformedInput) {
  ExperimentConfig c;
  EXPECT_THROW(c.set("no_such_key", "1"), std::invalid_argument);
  EXPECT_THROW(c.set("trials", "ten"), std::invalid_argument);
  EXPECT_THROW(c.set("snr_db", "1.5x"), std::invalid_argument);
  EXPECT_THROW(c.set("methods", "pdip,newton"), std::invalid_argument);
  EXPECT_THROW(c.set("axis", "diagonal"), std::invalid_argument);
  std::istringstream in("axis snr\n");
  EXPECT_THROW(ExperimentConfig::parse(in), std::invalid_argument);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/dir/cfg"),
               std::runtime_error);
}

TEST(Config, ValidateEnforcesInvariants) {
  ExperimentConfig c = small_config();
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.values.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.axis = SweepAxis::kAntennas;
  c.values = {2.5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.values = {1.0};  // FPA needs two antennas
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.methods = {Method::kPdip};
  EXPECT_NO_THROW(c.validate());
}

TEST(Csv, FormatNumberIsShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-10.0), "-10");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, FormatNumberIgnoresLocale) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  // Not every image ships a comma-decimal locale; skip the switch if absent.
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    EXPECT_EQ(format_number(2.5), "2.5");
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
  EXPECT_EQ(format_number(2.5), "2.5");
}

TEST(Csv, RowLayout) {
  CsvRow row{SweepAxis::kSnr, -5.0, 3, Method::kSca, 1.25, 7, 0, 4};
  EXPECT_EQ(format_row(row), "snr_db,-5,3,sca,1.25,7,0,4");
  row.trial.reset();
  row.seed.reset();
  row.rounds = 6.5;
  EXPECT_EQ(format_row(row), "snr_db,-5,mean,sca,1.25,6.5,0,");
}

TEST(Sweep, HeaderRowsAndMeans) {
  const ExperimentConfig c = small_config();
  std::ostringstream out;
  const SweepResult r = run_sweep(c, &out);
  const auto rows = lines(out.str());
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), kCsvHeader);
  const std::size_t per_value = c.trials * c.methods.size();
  EXPECT_EQ(rows.size(), 1 + 2 * per_value + 2 * c.methods.size());
  EXPECT_EQ(r.runs.size(), 2 * per_value);
  EXPECT_EQ(rows[1].rfind("snr_db,-10,0,pdip,", 0), 0u) << rows[1];
  EXPECT_NE(rows.back().find(",mean,fpa,"), std::string::npos) << rows.back();
  // Lower noise gives a lower mean for every method.
  for (Method m : c.methods) {
    EXPECT_LT(r.mean_mse(10.0, m), r.mean_mse(-10.0, m));
  }
}

TEST(Sweep, PairedSeedingAcrossMethods) {
  const ExperimentConfig c = small_config();
  const Scenario a = trial_scenario(c, -10.0, 1);
  const Scenario b = trial_scenario(c, -10.0, 1);
  EXPECT_EQ(a.thetas, b.thetas);
  EXPECT_EQ(a.alphas, b.alphas);
  const SweepResult r = run_sweep(c);
  for (const RunRecord& rec : r.runs) {
    EXPECT_EQ(rec.seed, c.base_seed + static_cast<std::uint64_t>(rec.trial));
  }
  // The same draw underlies different SNR values.
  EXPECT_EQ(trial_scenario(c, 10.0, 1).thetas, a.thetas);
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreads) {
  ExperimentConfig c = small_config();
  std::ostringstream first, second, threaded;
  run_sweep(c, &first);
  run_sweep(c, &second);
  c.threads = 3;
  run_sweep(c, &threaded);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str(), threaded.str());
}

TEST(Sweep, TraceRowsAreMonotone) {
  ExperimentConfig c = small_config();
  c.axis = SweepAxis::kTrace;
  c.trials = 1;
  c.methods = {Method::kPdip};
  std::ostringstream out;
  const SweepResult r = run_sweep(c, &out);
  ASSERT_EQ(r.runs.size(), 1u);
  const auto& hist = r.runs[0].report.mse_history;
  const auto rows = lines(out.str());
  // header + one row per round + one mean row per round
  EXPECT_EQ(rows.size(), 1 + 2 * hist.size());
  double prev = std::numeric_limits<double>::infinity();
  for (const CsvRow& row : r.rows) {
    if (!row.trial) continue;
    EXPECT_LE(row.mse, prev + kMonotoneSlack);
    prev = row.mse;
  }
}

TEST(Sweep, FailingSinkThrows) {
  const ExperimentConfig c = small_config();
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  EXPECT_THROW(run_sweep(c, &out), std::runtime_error);
}

TEST(OutputPath, UsesEnvironmentDirectoryForRelativePaths) {
  ::setenv(kOutputDirEnv, "/tmp/fluidair-out", 1);
  EXPECT_EQ(resolve_output_path("a.csv"), "/tmp/fluidair-out/a.csv");
  EXPECT_EQ(resolve_output_path("/abs/a.csv"), "/abs/a.csv");
  EXPECT_EQ(resolve_output_path("-"), "-");
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_path("a.csv"), "a.csv");
}

}  // namespace
}  // namespace fluidair
