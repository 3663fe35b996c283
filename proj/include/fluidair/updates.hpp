// Closed-form AO subproblem solutions for the transmit coefficients b (per-user
// QCQP solved through its KKT system) and the decoding vector m (regularised
// least squares).
#pragma once

#include "fluidair/model.hpp"

namespace fluidair {

/// |m^H h_k| below this is treated as zero and b_k = 0 is returned.
inline constexpr double kZeroGainThreshold = 1e-12;

struct BUpdate {
  Complex b;
  double multiplier;  // optimal mu_k of the power constraint
};

/// Minimises |m^H h b - 1|^2 subject to |b|^2 <= power.
BUpdate solve_b_single(const ComplexVec& m, const ComplexVec& h, double power);

inline Complex update_b_single(const ComplexVec& m, const ComplexVec& h,
                               double power) {
  return solve_b_single(m, h, power).b;
}

ComplexVec update_b(const ComplexVec& m, const Scenario& scenario,
                    const RealVec& x);

/// (sigma^2 I + sum_k |b_k|^2 h_k h_k^H)^{-1} sum_k b_k h_k, via a Cholesky
/// solve of the Hermitian positive definite system.
ComplexVec update_m(const ComplexVec& b, const Scenario& scenario,
                    const RealVec& x);

}  // namespace fluidair
