#include "fluidair/sca.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fluidair {

QuadraticForm build_F_upper(const EffectiveWeights& weights, int k,
                            const RealVec& anchor) {
  const int n_ant = weights.antennas();
  const RealVec mag = weights.magnitude.row(k).transpose();
  const double phi = weights.frequency[k];
  const double phi2 = phi * phi;

  // With u_n = phi x_n - arg w_{k,n}, q(n, l) = u_n - u_l, so the double sums
  // over (n, l) factor through these weighted moments.
  RealVec c(n_ant), s(n_ant);
  for (int n = 0; n < n_ant; ++n) {
    const double u = phi * anchor[n] - weights.phase(k, n);
    c[n] = std::cos(u);
    s[n] = std::sin(u);
  }
  const double total = mag.sum();
  const double sum_c = mag.dot(c);
  const double sum_s = mag.dot(s);
  const double sum_x = mag.dot(anchor);
  const double sum_xx = mag.dot(anchor.cwiseProduct(anchor));

  QuadraticForm out;
  out.A = phi2 * (total * RealMat(mag.asDiagonal()) - mag * mag.transpose());
  out.v.resize(n_ant);
  double cross = 0.0;  // sum_n x_n wbar_n sum_l wbar_l sin q(n, l)
  for (int n = 0; n < n_ant; ++n) {
    const double sin_row = s[n] * sum_c - c[n] * sum_s;
    // varphi_{n,l} - varphi_{l,n} = 2 varphi_{n,l} by antisymmetry in (n, l)
    out.v[n] = 2.0 * mag[n] *
               (phi * sin_row + phi2 * (anchor[n] * total - sum_x));
    cross += anchor[n] * mag[n] * sin_row;
  }
  out.C = phi2 * (total * sum_xx - sum_x * sum_x) + sum_c * sum_c +
          sum_s * sum_s + 2.0 * phi * cross;
  return out;
}

GLowerBound build_G_lower(const EffectiveWeights& weights, int k,
                          const RealVec& anchor) {
  const int n_ant = weights.antennas();
  const double phi = weights.frequency[k];
  const double phi2 = phi * phi;
  GLowerBound out;
  out.A = RealMat::Zero(n_ant, n_ant);
  out.v = RealVec::Zero(n_ant);
  for (int n = 0; n < n_ant; ++n) {
    const double w = weights.magnitude(k, n);
    const double u = phi * anchor[n] - weights.phase(k, n);
    out.A(n, n) = phi2 * w;
    out.v[n] = w * (phi2 * anchor[n] - std::sin(u) * phi);
    out.C += w * (std::cos(u) + std::sin(u) * phi * anchor[n] -
                  0.5 * phi2 * anchor[n] * anchor[n]);
  }
  return out;
}

Surrogate build_surrogate(const EffectiveWeights& weights,
                          const RealVec& anchor) {
  const int n_ant = weights.antennas();
  Surrogate s;
  s.anchor = anchor;
  s.form.A = RealMat::Zero(n_ant, n_ant);
  s.form.v = RealVec::Zero(n_ant);
  for (int k = 0; k < weights.users(); ++k) {
    const QuadraticForm upper = build_F_upper(weights, k, anchor);
    const GLowerBound lower = build_G_lower(weights, k, anchor);
    s.form.A += upper.A + lower.A;
    s.form.v += upper.v + 2.0 * lower.v;
    s.form.C += upper.C - 2.0 * lower.C + 1.0;
  }
  return s;
}

SolveReport sca_solve(const ApvObjective& objective, const RealVec& x0,
                      const ScaOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (x0.size() != objective.antennas() ||
      !is_feasible(x0, objective.aperture(), objective.min_spacing())) {
    throw std::invalid_argument("sca_solve: x0 is not feasible");
  }
  SolveReport rep;
  rep.x = x0;
  double current = objective.residual_sum(rep.x);
  rep.objective_history.push_back(current);

  rep.status = SolveStatus::kMaxIterations;
  for (int outer = 1; outer <= options.max_outer; ++outer) {
    const Surrogate surrogate = build_surrogate(objective.weights(), rep.x);
    const QuadraticObjective qp(surrogate.form);
    PdipReport inner;
    try {
      const RealVec warm = strictly_feasible_start(
          rep.x, objective.aperture(), objective.min_spacing());
      inner = pdip_solve(qp, objective.constraints(), warm, options.inner);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "inner QP failed at outer iteration " << outer << ": " << e.what();
      rep.status = SolveStatus::kNumericalFailure;
      rep.message = os.str();
      break;
    }
    if (inner.status == SolveStatus::kNumericalFailure) {
      std::ostringstream os;
      os << "inner QP failed at outer iteration " << outer << ": "
         << inner.message;
      rep.status = SolveStatus::kNumericalFailure;
      rep.message = os.str();
      break;
    }

    const double candidate = objective.residual_sum(inner.x);
    if (candidate > current) {
      // The inner solve stops at a finite duality gap, so at a fixed point
      // the new iterate can land marginally above the anchor.
      rep.status = SolveStatus::kConverged;
      rep.iterations = outer;
      break;
    }
    const double model_decrease = current - surrogate(inner.x);
    const double move = (inner.x - rep.x).cwiseAbs().maxCoeff();
    rep.x = inner.x;
    current = candidate;
    rep.objective_history.push_back(current);
    rep.iterations = outer;
    if (move < options.tol_x ||
        model_decrease < options.tol_f * std::max(1.0, std::abs(current))) {
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
