// Primal-dual interior-point method for
//   min g(x)  s.t.  C x + d <= 0
// with a smooth (possibly non-convex) objective and linear inequalities.
//
// Each iteration sets the barrier scale delta = xi * m / eta from the
// surrogate duality gap eta = -f(x)^T nu, solves the primal-dual Newton
// system, and takes a backtracking step that keeps f(x) < 0 and nu > 0.
#pragma once

#include "fluidair/apv_objective.hpp"
#include "fluidair/solve_report.hpp"

#include <optional>

namespace fluidair {

struct PdipOptions {
  double xi = 10.0;
  double eps = 1e-8;       // duality-gap tolerance
  double eps_feas = 1e-8;  // dual-residual tolerance
  int max_iters = 200;
  double a_ls = 0.05;
  double b_ls = 0.5;
  double hessian_damping = 0.0;  // initial rho added to the objective Hessian
  int max_damping_escalations = 5;
  int max_backtracks = 60;

  void validate() const;
};

struct PdipResiduals {
  RealVec dual;  // grad g(x) + C^T nu
  RealVec cent;  // -diag(nu) f(x) - (1/delta) 1

  double norm() const {
    return std::sqrt(dual.squaredNorm() + cent.squaredNorm());
  }
};

/// Requires f(x) < 0, nu > 0 and delta > 0; throws std::invalid_argument
/// otherwise.
PdipResiduals pdip_residuals(const SmoothObjective& objective,
                             const LinearConstraints& constraints,
                             const RealVec& x, const RealVec& nu, double delta);

struct NewtonStep {
  RealVec dx;
  RealVec dnu;
  double damping = 0.0;  // rho actually used
  int escalations = 0;
};

/// Solves
///   [ H + rho I      C^T       ] [dx ]     [ r_dual ]
///   [ -diag(nu) C   -diag(f)   ] [dnu] = - [ r_cent ]
/// by eliminating dnu and Cholesky-factoring
///   H + rho I + C^T diag(nu / -f) C.
/// When that factorisation fails rho escalates, starting from
/// 1e-3 * max(1, ||H||_F) and growing by 10x, at most
/// `max_damping_escalations` times; then std::runtime_error is thrown.
NewtonStep pdip_newton_step(const SmoothObjective& objective,
                            const LinearConstraints& constraints,
                            const RealVec& x, const RealVec& nu, double delta,
                            const PdipOptions& options = {});

struct PdipIterate {
  double eta = 0.0;
  double dual_norm = 0.0;
  double residual_before = 0.0;  // ||r|| at the scale delta of this step
  double residual_after = 0.0;
  double step = 0.0;             // accepted gamma
  double damping = 0.0;
  bool merit_step = false;       // accepted on barrier-merit decrease
};

struct PdipReport : SolveReport {
  RealVec nu;
  double eta = 0.0;
  double dual_norm = 0.0;
  std::vector<PdipIterate> trace;
};

/// Runs from a strictly feasible x0. nu defaults to -1/f_i(x0).
///
/// The step length is capped at 0.99 of the largest keeping nu > 0, halved
/// until f(x) < 0, then backtracked until
///   ||r(x + g dx, nu + g dnu)|| <= (1 - a_ls g) ||r(x, nu)||.
/// When the Newton system needed damping, the step is instead accepted on
/// Armijo decrease of the barrier merit
/// g(x) - (1/delta) sum_i log(-f_i(x)), for which the damped direction is
/// always a descent direction.
PdipReport pdip_solve(const SmoothObjective& objective,
                      const LinearConstraints& constraints, const RealVec& x0,
                      const PdipOptions& options = {},
                      std::optional<RealVec> nu0 = std::nullopt);

/// Moves `x` strictly inside the APV feasible set by taking the convex
/// combination (1 - t) x + t c with c the interior uniform grid; t starts at
/// 1e-3 and doubles until every constraint is strictly inactive. Points that
/// already satisfy f(x) < -margin are returned unchanged.
/// Throws std::invalid_argument when the set has no interior.
RealVec strictly_feasible_start(const RealVec& x, double aperture,
                                double min_spacing, double margin = 1e-9);

}  // namespace fluidair
