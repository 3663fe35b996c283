// Alternating optimisation of (m, b, x): each round solves the decoding
// vector in closed form, then the transmit coefficients, then moves the
// antennas with the selected position solver. FPA keeps the uniform grid.
#pragma once

#include "fluidair/pdip.hpp"
#include "fluidair/pgd.hpp"
#include "fluidair/sca.hpp"

#include <optional>
#include <string_view>

namespace fluidair {

enum class Method { kPdip, kSca, kPgd, kFpa };

std::string_view to_string(Method method);
/// Accepts "pdip", "sca", "pgd", "fpa" (case-insensitive).
std::optional<Method> parse_method(std::string_view text);

/// Slack allowed in the round-to-round MSE monotonicity check.
inline constexpr double kMonotoneSlack = 1e-9;

struct AoOptions {
  Method method = Method::kPdip;
  int max_rounds = 100;
  double tol_mse = 1e-6;  // relative decrease between rounds
  PdipOptions pdip;
  ScaOptions sca;
  PgdOptions pgd;
};

struct AoRound {
  double mse_after_m = 0.0;
  double mse_after_b = 0.0;
  double mse_after_x = 0.0;
  bool x_accepted = false;
  int inner_iterations = 0;
  SolveStatus inner_status = SolveStatus::kConverged;
};

struct AoReport {
  std::vector<double> mse_history;  // MSE at the end of each round
  std::vector<AoRound> rounds_log;
  TransceiverState state;
  int rounds = 0;
  int inner_iterations = 0;  // summed over all x-steps
  SolveStatus status = SolveStatus::kMaxIterations;
  std::string message;
  double seconds = 0.0;

  /// Every recorded update (within and across rounds) is non-increasing.
  bool monotone(double slack = kMonotoneSlack) const;
};

/// aperture / (N - 1) * [0, 1, ..., N - 1]; requires N >= 2.
RealVec fpa_positions(int antennas, double aperture);

/// Starts from b_k = sqrt(P_k) and the uniform grid (shrunk strictly inside
/// the box for PDIP). A position step is kept only when it does not increase
/// the exact MSE. Stops when the relative decrease over a round falls below
/// tol_mse or after max_rounds.
AoReport ao_optimize(const Scenario& scenario, const AoOptions& options = {});

}  // namespace fluidair
