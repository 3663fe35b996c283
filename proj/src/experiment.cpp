#include "fluidair/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace fluidair {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSnr: return "snr_db";
    case SweepAxis::kAntennas: return "N";
    case SweepAxis::kUsers: return "K";
    case SweepAxis::kTrace: return "trace";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view text) {
  if (text == "snr" || text == "snr_db") return SweepAxis::kSnr;
  if (text == "N" || text == "n" || text == "antennas") {
    return SweepAxis::kAntennas;
  }
  if (text == "K" || text == "k" || text == "users") return SweepAxis::kUsers;
  if (text == "trace") return SweepAxis::kTrace;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("config key '" + std::string(key) +
                              "': cannot parse '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    bad_value(key, text);
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) bad_value(key, text);
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  bad_value(key, text);
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "axis") {
    const auto a = parse_axis(value);
    if (!a) bad_value(key, value);
    axis = *a;
  } else if (key == "values") {
    values.clear();
    if (!value.empty()) {
      for (auto part : split(value, ',')) values.push_back(to_double(key, part));
    }
  } else if (key == "N") {
    scenario.antennas = to_int<int>(key, value);
  } else if (key == "K") {
    scenario.users = to_int<int>(key, value);
  } else if (key == "snr_db") {
    scenario.snr_db = to_double(key, value);
  } else if (key == "P0") {
    scenario.p0 = to_double(key, value);
  } else if (key == "alpha_min") {
    scenario.alpha_min = to_double(key, value);
  } else if (key == "alpha_max") {
    scenario.alpha_max = to_double(key, value);
  } else if (key == "aperture_per_antenna") {
    scenario.aperture_per_antenna = to_double(key, value);
  } else if (key == "min_spacing") {
    scenario.min_spacing = to_double(key, value);
  } else if (key == "methods") {
    methods.clear();
    for (auto part : split(value, ',')) {
      const auto m = parse_method(part);
      if (!m) bad_value(key, part);
      methods.push_back(*m);
    }
  } else if (key == "trials") {
    trials = to_int<int>(key, value);
  } else if (key == "base_seed" || key == "seed") {
    base_seed = to_int<std::uint64_t>(key, value);
  } else if (key == "out") {
    out = std::string(value);
  } else if (key == "threads") {
    threads = to_int<int>(key, value);
  } else if (key == "record_timing") {
    record_timing = to_bool(key, value);
  } else if (key == "max_rounds") {
    ao.max_rounds = to_int<int>(key, value);
  } else if (key == "tol_mse") {
    ao.tol_mse = to_double(key, value);
  } else if (key == "pdip.xi") {
    ao.pdip.xi = to_double(key, value);
  } else if (key == "pdip.eps") {
    ao.pdip.eps = to_double(key, value);
  } else if (key == "pdip.eps_feas") {
    ao.pdip.eps_feas = to_double(key, value);
  } else if (key == "pdip.max_iters") {
    ao.pdip.max_iters = to_int<int>(key, value);
  } else if (key == "sca.max_outer") {
    ao.sca.max_outer = to_int<int>(key, value);
  } else if (key == "sca.tol_x") {
    ao.sca.tol_x = to_double(key, value);
  } else if (key == "sca.tol_f") {
    ao.sca.tol_f = to_double(key, value);
  } else if (key == "pgd.initial_step") {
    ao.pgd.initial_step = to_double(key, value);
  } else if (key == "pgd.max_iters") {
    ao.pgd.max_iters = to_int<int>(key, value);
  } else if (key == "pgd.tol") {
    ao.pgd.tol = to_double(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) +
                                "'");
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (ao.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  if (!(ao.tol_mse >= 0.0)) throw std::invalid_argument("tol_mse must be >= 0");
  ao.pdip.validate();
  if (axis != SweepAxis::kTrace && values.empty()) {
    throw std::invalid_argument("values must list at least one axis value");
  }
  if (axis == SweepAxis::kAntennas || axis == SweepAxis::kUsers) {
    for (double v : values) {
      if (v < 1.0 || v != std::floor(v)) {
        throw std::invalid_argument("N and K axis values must be positive integers");
      }
    }
  }
  const bool needs_grid =
      std::find(methods.begin(), methods.end(), Method::kFpa) != methods.end();
  for (double v : axis == SweepAxis::kTrace ? std::vector<double>{0.0} : values) {
    ScenarioParams p = scenario;
    if (axis == SweepAxis::kSnr) p.snr_db = v;
    if (axis == SweepAxis::kAntennas) p.antennas = static_cast<int>(v);
    if (axis == SweepAxis::kUsers) p.users = static_cast<int>(v);
    p.validate();
    if (needs_grid && p.antennas < 2) {
      throw std::invalid_argument("fpa needs at least two antennas");
    }
  }
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse(in);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number failed");
  return std::string(buf, ptr);
}

std::string format_row(const CsvRow& row) {
  std::string s;
  s.reserve(96);
  s += to_string(row.axis);
  s += ',';
  s += format_number(row.value);
  s += ',';
  s += row.trial ? std::to_string(*row.trial) : std::string("mean");
  s += ',';
  s += to_string(row.method);
  s += ',';
  s += format_number(row.mse);
  s += ',';
  s += format_number(row.rounds);
  s += ',';
  s += format_number(row.seconds);
  s += ',';
  if (row.seed) s += std::to_string(*row.seed);
  return s;
}

double SweepResult::mean_mse(double value, Method method) const {
  double sum = 0.0;
  int count = 0;
  for (const RunRecord& r : runs) {
    if (r.value == value && r.method == method) {
      sum += r.report.state.mse;
      ++count;
    }
  }
  if (count == 0) throw std::out_of_range("mean_mse: no matching runs");
  return sum / count;
}

double SweepResult::mean_rounds(double value, Method method) const {
  double sum = 0.0;
  int count = 0;
  for (const RunRecord& r : runs) {
    if (r.value == value && r.method == method) {
      sum += r.report.rounds;
      ++count;
    }
  }
  if (count == 0) throw std::out_of_range("mean_rounds: no matching runs");
  return sum / count;
}

Scenario trial_scenario(const ExperimentConfig& config, double value,
                        int trial) {
  ScenarioParams p = config.scenario;
  switch (config.axis) {
    case SweepAxis::kSnr: p.snr_db = value; break;
    case SweepAxis::kAntennas: p.antennas = static_cast<int>(value); break;
    case SweepAxis::kUsers: p.users = static_cast<int>(value); break;
    case SweepAxis::kTrace: break;
  }
  return sample_scenario(p, config.base_seed + static_cast<std::uint64_t>(trial));
}

namespace {

struct Job {
  int trial;
  Method method;
};

std::vector<AoReport> run_jobs(const ExperimentConfig& config, double value,
                               const std::vector<Job>& jobs) {
  std::vector<AoReport> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Scenario s = trial_scenario(config, value, jobs[i].trial);
        AoOptions opts = config.ao;
        opts.method = jobs[i].method;
        out[i] = ao_optimize(s, opts);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads =
      std::min<int>(config.threads, static_cast<int>(jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error("sweep job failed: " + e);
  }
  return out;
}

void emit(std::ostream* sink, const std::vector<CsvRow>& rows,
          std::size_t from) {
  if (!sink) return;
  for (std::size_t i = from; i < rows.size(); ++i) {
    *sink << format_row(rows[i]) << '\n';
  }
  sink->flush();
  if (!*sink) throw std::runtime_error("failed writing CSV output");
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, std::ostream* sink) {
  config.validate();
  SweepResult result;
  if (sink) {
    *sink << kCsvHeader << '\n';
    sink->flush();
    if (!*sink) throw std::runtime_error("failed writing CSV output");
  }

  std::vector<Job> jobs;
  for (int t = 0; t < config.trials; ++t) {
    for (Method m : config.methods) jobs.push_back({t, m});
  }
  auto seconds = [&](const AoReport& r) {
    return config.record_timing ? r.seconds : 0.0;
  };

  const bool trace = config.axis == SweepAxis::kTrace;
  const std::vector<double> axis_values =
      trace ? std::vector<double>{0.0} : config.values;

  for (double value : axis_values) {
    std::vector<AoReport> reports = run_jobs(config, value, jobs);
    const std::size_t first_row = result.rows.size();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const std::uint64_t seed =
          config.base_seed + static_cast<std::uint64_t>(jobs[i].trial);
      const AoReport& rep = reports[i];
      if (trace) {
        for (std::size_t r = 0; r < rep.mse_history.size(); ++r) {
          result.rows.push_back({config.axis, static_cast<double>(r + 1),
                                 jobs[i].trial, jobs[i].method,
                                 rep.mse_history[r],
                                 static_cast<double>(rep.rounds),
                                 seconds(rep), seed});
        }
      } else {
        result.rows.push_back({config.axis, value, jobs[i].trial,
                               jobs[i].method, rep.state.mse,
                               static_cast<double>(rep.rounds), seconds(rep),
                               seed});
      }
      result.runs.push_back(
          {value, jobs[i].trial, jobs[i].method, seed, std::move(reports[i])});
    }
    emit(sink, result.rows, first_row);
  }

  // Aggregate rows, ordered by (axis value, method).
  const std::size_t first_mean = result.rows.size();
  for (double value : axis_values) {
    for (Method m : config.methods) {
      std::vector<const RunRecord*> group;
      for (const RunRecord& r : result.runs) {
        if (r.value == value && r.method == m) group.push_back(&r);
      }
      const double n = static_cast<double>(group.size());
      if (trace) {
        std::size_t longest = 0;
        for (const RunRecord* r : group) {
          longest = std::max(longest, r->report.mse_history.size());
        }
        for (std::size_t round = 0; round < longest; ++round) {
          double mse_sum = 0.0, round_sum = 0.0, sec_sum = 0.0;
          for (const RunRecord* r : group) {
            const auto& h = r->report.mse_history;
            mse_sum += h[std::min(round, h.size() - 1)];
            round_sum += r->report.rounds;
            sec_sum += seconds(r->report);
          }
          result.rows.push_back({config.axis, static_cast<double>(round + 1),
                                 std::nullopt, m, mse_sum / n, round_sum / n,
                                 sec_sum / n, std::nullopt});
        }
      } else {
        double mse_sum = 0.0, round_sum = 0.0, sec_sum = 0.0;
        for (const RunRecord* r : group) {
          mse_sum += r->report.state.mse;
          round_sum += r->report.rounds;
          sec_sum += seconds(r->report);
        }
        result.rows.push_back({config.axis, value, std::nullopt, m,
                               mse_sum / n, round_sum / n, sec_sum / n,
                               std::nullopt});
      }
    }
  }
  emit(sink, result.rows, first_mean);
  return result;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path == "-") return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

}  // namespace fluidair
