#include "fluidair/pdip.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluidair {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterations: return "max_iterations";
    case SolveStatus::kLineSearchFailed: return "line_search_failed";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void PdipOptions::validate() const {
  if (!(xi > 1.0)) throw std::invalid_argument("pdip: xi must exceed 1");
  if (!(eps > 0.0) || !(eps_feas > 0.0)) {
    throw std::invalid_argument("pdip: tolerances must be positive");
  }
  if (!(a_ls > 0.0 && a_ls < 0.5)) {
    throw std::invalid_argument("pdip: a_ls must lie in (0, 0.5)");
  }
  if (!(b_ls > 0.0 && b_ls < 1.0)) {
    throw std::invalid_argument("pdip: b_ls must lie in (0, 1)");
  }
  if (!(hessian_damping >= 0.0)) {
    throw std::invalid_argument("pdip: hessian_damping must be >= 0");
  }
  if (max_iters < 0 || max_damping_escalations < 0 || max_backtracks < 1) {
    throw std::invalid_argument("pdip: iteration limits must be positive");
  }
}

namespace {

bool strictly_negative(const RealVec& f) {
  return f.size() == 0 || f.maxCoeff() < 0.0;
}

double barrier_merit(const SmoothObjective& objective, const RealVec& x,
                     const RealVec& f, double delta) {
  return objective.value(x) - (-f.array()).log().sum() / delta;
}

}  // namespace

PdipResiduals pdip_residuals(const SmoothObjective& objective,
                             const LinearConstraints& constraints,
                             const RealVec& x, const RealVec& nu,
                             double delta) {
  const RealVec f = constraints.values(x);
  if (!strictly_negative(f)) {
    throw std::invalid_argument("pdip_residuals: x is not strictly feasible");
  }
  if (nu.size() != f.size() || (nu.size() > 0 && !(nu.minCoeff() > 0.0))) {
    throw std::invalid_argument("pdip_residuals: nu must be positive");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("pdip_residuals: delta must be positive");
  }
  PdipResiduals r;
  r.dual = objective.gradient(x) + constraints.jacobian().transpose() * nu;
  r.cent = -(nu.array() * f.array()) - 1.0 / delta;
  return r;
}

NewtonStep pdip_newton_step(const SmoothObjective& objective,
                            const LinearConstraints& constraints,
                            const RealVec& x, const RealVec& nu, double delta,
                            const PdipOptions& options) {
  const RealMat& jac = constraints.jacobian();
  const RealVec f = constraints.values(x);
  const PdipResiduals r = pdip_residuals(objective, constraints, x, nu, delta);
  const RealMat hess = objective.hessian(x);
  if (!hess.allFinite()) {
    throw std::runtime_error("pdip: non-finite Hessian");
  }

  const RealVec barrier_weight = nu.array() / (-f.array());
  const RealMat reduced =
      hess + jac.transpose() * barrier_weight.asDiagonal() * jac;
  const RealVec rhs =
      -(r.dual + jac.transpose() * (r.cent.array() / f.array()).matrix());

  NewtonStep step;
  step.damping = options.hessian_damping;
  const double base = 1e-3 * std::max(1.0, hess.norm());
  const Eigen::Index n = x.size();
  for (;;) {
    Eigen::LLT<RealMat> chol(reduced +
                             step.damping * RealMat::Identity(n, n));
    if (chol.info() == Eigen::Success) {
      step.dx = chol.solve(rhs);
      if (step.dx.allFinite()) break;
    }
    if (step.escalations == options.max_damping_escalations) {
      throw std::runtime_error(
          "pdip: Newton system stayed singular after damping escalation");
    }
    step.damping = step.damping > 0.0 ? 10.0 * step.damping : base;
    ++step.escalations;
  }
  step.dnu = (r.cent.array() - nu.array() * (jac * step.dx).array()) /
             f.array();
  return step;
}

RealVec strictly_feasible_start(const RealVec& x, double aperture,
                                double min_spacing, double margin) {
  const auto n = static_cast<int>(x.size());
  const LinearConstraints cons = LinearConstraints::apv(n, aperture, min_spacing);
  if (cons.values(x).maxCoeff() < -margin) return x;

  // Chain with equal slack e on every constraint.
  const double slack = (aperture - (n - 1) * min_spacing) / (n + 1);
  if (!(slack > 0.0)) {
    throw std::invalid_argument("feasible set has an empty interior");
  }
  RealVec centre(n);
  for (int i = 0; i < n; ++i) centre[i] = slack + i * (min_spacing + slack);

  for (double t = 1e-3; t < 1.0; t *= 2.0) {
    RealVec candidate = (1.0 - t) * x + t * centre;
    if (cons.values(candidate).maxCoeff() < -margin) return candidate;
  }
  return centre;
}

PdipReport pdip_solve(const SmoothObjective& objective,
                      const LinearConstraints& constraints, const RealVec& x0,
                      const PdipOptions& options, std::optional<RealVec> nu0) {
  options.validate();
  const auto start = std::chrono::steady_clock::now();
  const RealMat& jac = constraints.jacobian();
  const double m = static_cast<double>(constraints.count());

  PdipReport rep;
  rep.x = x0;
  RealVec f = constraints.values(rep.x);
  if (!strictly_negative(f)) {
    throw std::invalid_argument("pdip_solve: x0 is not strictly feasible");
  }
  rep.nu = nu0 ? *nu0 : RealVec((-1.0 / f.array()).matrix());
  if (rep.nu.size() != f.size() || !(rep.nu.minCoeff() > 0.0)) {
    throw std::invalid_argument("pdip_solve: initial nu must be positive");
  }
  rep.eta = -f.dot(rep.nu);

  double g = objective.value(rep.x);
  if (!std::isfinite(g)) throw std::invalid_argument("pdip_solve: g(x0) not finite");
  rep.objective_history.push_back(g);

  for (;;) {
    const RealVec grad = objective.gradient(rep.x);
    if (!grad.allFinite()) {
      rep.status = SolveStatus::kNumericalFailure;
      rep.message = "non-finite gradient";
      break;
    }
    const RealVec dual = grad + jac.transpose() * rep.nu;
    rep.dual_norm = dual.norm();
    if (rep.dual_norm <= options.eps_feas && rep.eta <= options.eps) {
      rep.status = SolveStatus::kConverged;
      break;
    }
    if (rep.iterations >= options.max_iters) {
      rep.status = SolveStatus::kMaxIterations;
      break;
    }

    const double delta = options.xi * m / rep.eta;
    NewtonStep step;
    try {
      step = pdip_newton_step(objective, constraints, rep.x, rep.nu, delta,
                              options);
    } catch (const std::runtime_error& e) {
      rep.status = SolveStatus::kNumericalFailure;
      rep.message = e.what();
      break;
    }

    const RealVec cent = -(rep.nu.array() * f.array()) - 1.0 / delta;
    const double r0 = std::sqrt(dual.squaredNorm() + cent.squaredNorm());

    double gamma = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < step.dnu.size(); ++i) {
      if (step.dnu[i] < 0.0) gamma = std::min(gamma, -rep.nu[i] / step.dnu[i]);
    }
    gamma = std::min(1.0, 0.99 * gamma);

    int backtracks = 0;
    RealVec x_new = rep.x + gamma * step.dx;
    RealVec f_new = constraints.values(x_new);
    while (!strictly_negative(f_new) && backtracks < options.max_backtracks) {
      gamma *= options.b_ls;
      x_new = rep.x + gamma * step.dx;
      f_new = constraints.values(x_new);
      ++backtracks;
    }
    if (!strictly_negative(f_new)) {
      rep.status = SolveStatus::kLineSearchFailed;
      rep.message = "could not restore strict feasibility";
      break;
    }
    const double gamma_feasible = gamma;

    PdipIterate it;
    it.damping = step.damping;
    bool accepted = false;
    RealVec nu_new;
    // A damped direction need not reduce the residual; near gamma = 0 the
    // residual test then passes on rounding alone and the iterates stall.
    for (; step.damping == 0.0 && backtracks < options.max_backtracks;
         ++backtracks) {
      x_new = rep.x + gamma * step.dx;
      nu_new = rep.nu + gamma * step.dnu;
      f_new = constraints.values(x_new);
      const RealVec grad_new = objective.gradient(x_new);
      const RealVec dual_new = grad_new + jac.transpose() * nu_new;
      const RealVec cent_new = -(nu_new.array() * f_new.array()) - 1.0 / delta;
      const double r1 =
          std::sqrt(dual_new.squaredNorm() + cent_new.squaredNorm());
      if (std::isfinite(r1) && r1 <= (1.0 - options.a_ls * gamma) * r0) {
        it.residual_after = r1;
        accepted = true;
        break;
      }
      gamma *= options.b_ls;
    }

    if (!accepted && step.damping > 0.0) {
      const RealVec merit_grad =
          grad + jac.transpose() * (1.0 / (-f.array())).matrix() / delta;
      const double slope = merit_grad.dot(step.dx);
      const double merit0 = barrier_merit(objective, rep.x, f, delta);
      gamma = gamma_feasible;
      for (int bt = 0; bt < options.max_backtracks && slope < 0.0; ++bt) {
        x_new = rep.x + gamma * step.dx;
        f_new = constraints.values(x_new);
        const double merit1 = barrier_merit(objective, x_new, f_new, delta);
        if (merit1 <= merit0 + options.a_ls * gamma * slope) {
          nu_new = rep.nu + gamma * step.dnu;
          it.merit_step = true;
          accepted = true;
          break;
        }
        gamma *= options.b_ls;
      }
    }
    if (!accepted) {
      rep.status = SolveStatus::kLineSearchFailed;
      rep.message = "no acceptable step along the Newton direction";
      break;
    }

    rep.x = std::move(x_new);
    rep.nu = std::move(nu_new);
    f = std::move(f_new);
    rep.eta = -f.dot(rep.nu);
    g = objective.value(rep.x);
    if (!std::isfinite(g)) {
      rep.status = SolveStatus::kNumericalFailure;
      rep.message = "non-finite objective";
      break;
    }
    ++rep.iterations;
    it.eta = rep.eta;
    it.dual_norm = rep.dual_norm;
    it.residual_before = r0;
    it.step = gamma;
    rep.trace.push_back(it);
    rep.objective_history.push_back(g);
  }

  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

}  // namespace fluidair
