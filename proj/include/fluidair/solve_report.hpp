#pragma once

#include "fluidair/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fluidair {

enum class SolveStatus {
  kConverged,
  kMaxIterations,
  kLineSearchFailed,
  kNumericalFailure,
};

std::string_view to_string(SolveStatus status);

/// Result of a position solve. `objective_history[0]` is the value at the
/// start point; one entry is appended per accepted iteration.
struct SolveReport {
  RealVec x;
  std::vector<double> objective_history;
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  double seconds = 0.0;
  std::string message;

  bool converged() const { return status == SolveStatus::kConverged; }
};

}  // namespace fluidair
