// Successive convex approximation of the APV subproblem.
//
// Around an anchor x^i, cos(u) is bounded above and below by its first-order
// expansion plus/minus (u - u0)^2 / 2. Applied to every term of F_k and G_k
// this gives a convex quadratic majoriser of sum_k |w_k^H a(x) - 1|^2 that is
// tight at the anchor. Each outer iteration minimises it over the linear APV
// constraints with the interior-point solver.
#pragma once

#include "fluidair/apv_objective.hpp"
#include "fluidair/pdip.hpp"

namespace fluidair {

/// x^T A x - v^T x + C, A symmetric.
struct QuadraticForm {
  RealMat A;
  RealVec v;
  double C = 0.0;

  double operator()(const RealVec& x) const {
    return x.dot(A * x) - v.dot(x) + C;
  }
};

/// Upper bound F_k(x | anchor) >= F_k(x).
QuadraticForm build_F_upper(const EffectiveWeights& weights, int k,
                            const RealVec& anchor);

/// Coefficients of the lower bound G_k(x | anchor) = -x^T A x + 2 v^T x + 2 C.
struct GLowerBound {
  RealMat A;
  RealVec v;
  double C = 0.0;

  double operator()(const RealVec& x) const {
    return -x.dot(A * x) + 2.0 * v.dot(x) + 2.0 * C;
  }
};

GLowerBound build_G_lower(const EffectiveWeights& weights, int k,
                          const RealVec& anchor);

/// sum_k [F_k(x | anchor) - G_k(x | anchor) + 1], which majorises
/// sum_k |w_k^H a(x, theta_k) - 1|^2.
struct Surrogate {
  QuadraticForm form;
  RealVec anchor;

  double operator()(const RealVec& x) const { return form(x); }
};

Surrogate build_surrogate(const EffectiveWeights& weights,
                          const RealVec& anchor);

class QuadraticObjective final : public SmoothObjective {
 public:
  explicit QuadraticObjective(QuadraticForm form) : form_(std::move(form)) {}

  double value(const RealVec& x) const override { return form_(x); }
  RealVec gradient(const RealVec& x) const override {
    return 2.0 * (form_.A * x) - form_.v;
  }
  RealMat hessian(const RealVec&) const override { return 2.0 * form_.A; }

 private:
  QuadraticForm form_;
};

struct ScaOptions {
  double tol_x = 1e-6;    // sup-norm step, wavelengths
  double tol_f = 1e-10;   // surrogate decrease, relative to max(1, |value|)
  int max_outer = 200;
  PdipOptions inner;
};

/// Records the true objective sum_k |w_k^H a - 1|^2 in objective_history.
/// Iterates only replace the current point when that objective does not
/// increase.
SolveReport sca_solve(const ApvObjective& objective, const RealVec& x0,
                      const ScaOptions& options = {});

}  // namespace fluidair
