// Monte Carlo sweeps over SNR, antenna count and user count, plus per-round
// traces, written as CSV.
//
// Config files are flat `key = value` text; `#` starts a comment. Keys:
//
//   axis          snr | N | K | trace
//   values        comma-separated axis values (ignored for trace)
//   N, K          antennas and users when not swept
//   snr_db        SNR in dB when not swept (sigma^2 = P0 / 10^(snr_db/10))
//   P0            per-user power budget
//   alpha_min, alpha_max    uniform range of the propagation gains
//   aperture_per_antenna    L = aperture_per_antenna * N (wavelengths)
//   min_spacing   L0 in wavelengths
//   methods       comma-separated subset of pdip,sca,pgd,fpa
//   trials        Monte Carlo trials per axis value
//   base_seed     trial t uses seed base_seed + t for every method and value
//   out           CSV path; empty or "-" writes to stdout
//   threads       worker threads (results are ordered independently)
//   record_timing true writes wall seconds; false writes 0 (reproducible)
//   max_rounds, tol_mse     AO stopping rule
//   pdip.xi, pdip.eps, pdip.eps_feas, pdip.max_iters
//   sca.max_outer, sca.tol_x, sca.tol_f
//   pgd.initial_step, pgd.max_iters, pgd.tol
#pragma once

#include "fluidair/ao.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluidair {

enum class SweepAxis { kSnr, kAntennas, kUsers, kTrace };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view text);

/// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "FLUIDAIR_OUTPUT_DIR";

inline constexpr std::string_view kCsvHeader =
    "axis,value,trial,method,mse,rounds,seconds,seed";

struct ExperimentConfig {
  SweepAxis axis = SweepAxis::kSnr;
  std::vector<double> values;
  ScenarioParams scenario;
  std::vector<Method> methods{Method::kPdip, Method::kSca, Method::kPgd,
                              Method::kFpa};
  int trials = 50;
  std::uint64_t base_seed = 1;
  std::string out;
  int threads = 1;
  bool record_timing = false;
  AoOptions ao;

  /// Throws std::invalid_argument naming the key on unknown keys or
  /// malformed values.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::string& path);
};

struct CsvRow {
  SweepAxis axis;
  double value;
  std::optional<int> trial;  // nullopt marks an aggregate mean row
  Method method;
  double mse;
  double rounds;
  double seconds;
  std::optional<std::uint64_t> seed;
};

std::string format_row(const CsvRow& row);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double v);

struct RunRecord {
  double value;
  int trial;
  Method method;
  std::uint64_t seed;
  AoReport report;
};

struct SweepResult {
  std::vector<CsvRow> rows;
  std::vector<RunRecord> runs;

  /// Mean final MSE of `method` at axis value `value`.
  double mean_mse(double value, Method method) const;
  double mean_rounds(double value, Method method) const;
};

/// Scenario for one trial at one axis value.
Scenario trial_scenario(const ExperimentConfig& config, double value,
                        int trial);

/// Runs every (axis value, trial, method) job. When `sink` is given the
/// header and each axis value's rows are written as soon as that value
/// completes, mean rows last. Throws std::runtime_error when the sink fails.
SweepResult run_sweep(const ExperimentConfig& config,
                      std::ostream* sink = nullptr);

/// Applies kOutputDirEnv to relative paths.
std::string resolve_output_path(const std::string& path);

}  // namespace fluidair
