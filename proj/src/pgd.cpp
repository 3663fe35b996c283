#include "fluidair/pgd.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

namespace fluidair {

RealVec project_feasible(const RealVec& v, double aperture,
                         double min_spacing) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("project_feasible: empty vector");
  const double upper = aperture - static_cast<double>(n - 1) * min_spacing;
  if (upper < 0.0) {
    throw std::invalid_argument("project_feasible: aperture too short");
  }

  struct Block {
    double sum;
    Eigen::Index count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    blocks.push_back({v[i] - static_cast<double>(i) * min_spacing, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }

  RealVec x(n);
  Eigen::Index i = 0;
  for (const Block& b : blocks) {
    const double z = std::clamp(b.mean(), 0.0, upper);
    for (Eigen::Index j = 0; j < b.count; ++j, ++i) {
      x[i] = z + static_cast<double>(i) * min_spacing;
    }
  }
  return x;
}

SolveReport pgd_solve(const ApvObjective& objective, const RealVec& x0,
                      const PgdOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const double aperture = objective.aperture();
  const double spacing = objective.min_spacing();
  if (x0.size() != objective.antennas() ||
      !is_feasible(x0, aperture, spacing)) {
    throw std::invalid_argument("pgd_solve: x0 is not feasible");
  }

  SolveReport rep;
  rep.x = x0;
  double g = objective.value(rep.x);
  rep.objective_history.push_back(g);
  rep.status = SolveStatus::kMaxIterations;

  while (rep.iterations < options.max_iters) {
    const RealVec grad = objective.gradient(rep.x);
    double gamma = options.initial_step;
    bool accepted = false;
    RealVec next;
    double g_next = g;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      next = project_feasible(rep.x - gamma * grad, aperture, spacing);
      g_next = objective.value(next);
      if (g_next <= g + options.armijo * grad.dot(next - rep.x)) {
        accepted = true;
        break;
      }
      gamma *= options.shrink;
    }
    if (!accepted) {
      // Even the shortest trial step failed the Armijo test; treat a
      // sub-tolerance trial move as stationarity.
      const double trial = (next - rep.x).cwiseAbs().maxCoeff();
      rep.status = trial < options.tol ? SolveStatus::kConverged
                                       : SolveStatus::kLineSearchFailed;
      break;
    }
    const double move = (next - rep.x).cwiseAbs().maxCoeff();
    rep.x = std::move(next);
    g = g_next;
    rep.objective_history.push_back(g);
    ++rep.iterations;
    if (move < options.tol) {
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
