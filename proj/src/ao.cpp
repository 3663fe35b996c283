#include "fluidair/ao.hpp"

#include "fluidair/updates.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fluidair {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kPdip: return "pdip";
    case Method::kSca: return "sca";
    case Method::kPgd: return "pgd";
    case Method::kFpa: return "fpa";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Method m : {Method::kPdip, Method::kSca, Method::kPgd, Method::kFpa}) {
    if (lower == to_string(m)) return m;
  }
  return std::nullopt;
}

bool AoReport::monotone(double slack) const {
  double prev = std::numeric_limits<double>::infinity();
  for (const AoRound& r : rounds_log) {
    for (double v : {r.mse_after_m, r.mse_after_b, r.mse_after_x}) {
      if (v > prev + slack) return false;
      prev = v;
    }
  }
  for (std::size_t t = 1; t < mse_history.size(); ++t) {
    if (mse_history[t] > mse_history[t - 1] + slack) return false;
  }
  return true;
}

RealVec fpa_positions(int antennas, double aperture) {
  if (antennas < 2) throw std::invalid_argument("fpa_positions: N >= 2");
  return uniform_positions(antennas, aperture);
}

namespace {

SolveReport solve_positions(const ApvObjective& objective, const RealVec& x,
                            const AoOptions& options) {
  switch (options.method) {
    case Method::kPdip: {
      const RealVec start = strictly_feasible_start(x, objective.aperture(),
                                                    objective.min_spacing());
      return pdip_solve(objective, objective.constraints(), start,
                        options.pdip);
    }
    case Method::kSca: return sca_solve(objective, x, options.sca);
    case Method::kPgd: return pgd_solve(objective, x, options.pgd);
    case Method::kFpa: break;
  }
  throw std::logic_error("solve_positions: FPA has no position step");
}

}  // namespace

AoReport ao_optimize(const Scenario& scenario, const AoOptions& options) {
  scenario.validate();
  if (options.max_rounds < 1) {
    throw std::invalid_argument("ao_optimize: max_rounds must be >= 1");
  }
  const auto start = std::chrono::steady_clock::now();
  const int n = scenario.antennas;

  AoReport rep;
  TransceiverState& st = rep.state;
  st.b = scenario.powers.cwiseSqrt().cast<Complex>();
  st.x = options.method == Method::kPdip
             ? interior_uniform_positions(n, scenario.aperture)
             : uniform_positions(n, scenario.aperture);
  st.m = ComplexVec::Zero(n);
  st.mse = mse(st.b, st.m, scenario, st.x);

  for (int round = 1; round <= options.max_rounds; ++round) {
    AoRound log;
    st.m = update_m(st.b, scenario, st.x);
    log.mse_after_m = mse(st.b, st.m, scenario, st.x);
    st.b = update_b(st.m, scenario, st.x);
    log.mse_after_b = mse(st.b, st.m, scenario, st.x);
    log.mse_after_x = log.mse_after_b;

    if (options.method != Method::kFpa) {
      const ApvObjective objective(st.b, st.m, scenario);
      try {
        const SolveReport inner = solve_positions(objective, st.x, options);
        log.inner_iterations = inner.iterations;
        log.inner_status = inner.status;
        rep.inner_iterations += inner.iterations;
        const double candidate = mse(st.b, st.m, scenario, inner.x);
        if (candidate <= log.mse_after_b &&
            is_feasible(inner.x, scenario.aperture, scenario.min_spacing)) {
          st.x = inner.x;
          log.mse_after_x = candidate;
          log.x_accepted = true;
        }
      } catch (const std::exception& e) {
        rep.status = SolveStatus::kNumericalFailure;
        rep.message = "round " + std::to_string(round) + ": " + e.what();
        rep.rounds_log.push_back(log);
        st.mse = log.mse_after_b;
        rep.mse_history.push_back(st.mse);
        rep.rounds = round;
        break;
      }
    }

    const double previous = rep.mse_history.empty()
                                ? std::numeric_limits<double>::infinity()
                                : rep.mse_history.back();
    st.mse = log.mse_after_x;
    rep.rounds_log.push_back(log);
    rep.mse_history.push_back(st.mse);
    rep.rounds = round;
    if (std::isfinite(previous) &&
        previous - st.mse <= options.tol_mse * std::max(previous, 1e-300)) {
      rep.status = SolveStatus::kConverged;
      break;
    }
  }

  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

}  // namespace fluidair
