#include "fluidair/updates.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidair {

BUpdate solve_b_single(const ComplexVec& m, const ComplexVec& h,
                       double power) {
  if (!(power > 0.0)) throw std::invalid_argument("power must be positive");
  if (m.size() != h.size()) {
    throw std::invalid_argument("solve_b_single: dimension mismatch");
  }
  const Complex gain = m.dot(h);  // m^H h
  const double mag = std::abs(gain);
  if (mag < kZeroGainThreshold) return {Complex(0.0, 0.0), 0.0};

  const double mu = std::max(mag / std::sqrt(power) - mag * mag, 0.0);
  Complex b = std::conj(gain) / (mag * mag + mu);
  // When the constraint is active |b| equals sqrt(power) analytically; pin it
  // so rounding never leaves b marginally outside the ball.
  if (mu > 0.0) b = std::polar(std::sqrt(power), std::arg(b));
  return {b, mu};
}

ComplexVec update_b(const ComplexVec& m, const Scenario& scenario,
                    const RealVec& x) {
  if (m.size() != scenario.antennas || x.size() != scenario.antennas) {
    throw std::invalid_argument("update_b: dimension mismatch");
  }
  ComplexVec b(scenario.users());
  for (int k = 0; k < scenario.users(); ++k) {
    b[k] = update_b_single(m, channel(scenario, k, x), scenario.powers[k]);
  }
  return b;
}

ComplexVec update_m(const ComplexVec& b, const Scenario& scenario,
                    const RealVec& x) {
  const int n = scenario.antennas;
  if (b.size() != scenario.users() || x.size() != n) {
    throw std::invalid_argument("update_m: dimension mismatch");
  }
  Eigen::MatrixXcd system =
      Eigen::MatrixXcd::Identity(n, n) * Complex(scenario.sigma2, 0.0);
  ComplexVec rhs = ComplexVec::Zero(n);
  for (int k = 0; k < scenario.users(); ++k) {
    const ComplexVec h = channel(scenario, k, x);
    system.selfadjointView<Eigen::Lower>().rankUpdate(h, std::norm(b[k]));
    rhs += b[k] * h;
  }
  Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> chol(system);
  if (chol.info() != Eigen::Success) {
    throw std::runtime_error("update_m: system matrix is not positive definite");
  }
  return chol.solve(rhs);
}

}  // namespace fluidair
