// Projected gradient descent baseline for the APV subproblem.
#pragma once

#include "fluidair/apv_objective.hpp"
#include "fluidair/solve_report.hpp"

namespace fluidair {

/// Euclidean projection onto {0 <= x_1, x_N <= L, x_n - x_{n-1} >= L0}.
///
/// With z_n = x_n - (n-1) L0 the set becomes 0 <= z_1 <= ... <= z_N <= U,
/// U = L - (N-1) L0; the projection is the isotonic regression of z (pool
/// adjacent violators, unit weights, merged left to right) clamped to
/// [0, U]. Throws std::invalid_argument when U < 0.
RealVec project_feasible(const RealVec& v, double aperture,
                         double min_spacing);

struct PgdOptions {
  double initial_step = 0.1;  // wavelengths
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 30;
  double tol = 1e-6;  // sup-norm move, wavelengths
  int max_iters = 500;
};

/// x <- P(x - gamma grad g(x)) with gamma backtracked from initial_step until
/// g(x+) <= g(x) + armijo * grad^T (x+ - x). objective_history holds g.
SolveReport pgd_solve(const ApvObjective& objective, const RealVec& x0,
                      const PgdOptions& options = {});

}  // namespace fluidair
