// Antenna-position objective g(x) = sum_k [F_k(x) - G_k(x)] with
//   F_k(x) = |w_k^H a(x, theta_k)|^2,   G_k(x) = 2 Re(w_k^H a(x, theta_k)),
// so that sum_k |w_k^H a(x, theta_k) - 1|^2 = g(x) + K.
#pragma once

#include "fluidair/model.hpp"

namespace fluidair {

/// Twice-differentiable objective consumed by the position solvers. Methods
/// must be reentrant; implementations are immutable after construction.
class SmoothObjective {
 public:
  virtual ~SmoothObjective() = default;
  virtual double value(const RealVec& x) const = 0;
  virtual RealVec gradient(const RealVec& x) const = 0;
  virtual RealMat hessian(const RealVec& x) const = 0;
};

/// Constraints f(x) = C x + d <= 0 (row-wise).
struct LinearConstraints {
  RealMat coefficients;  // C, rows = constraints
  RealVec offsets;       // d

  /// The N+1 APV constraints in order: -x_1 <= 0, x_N - L <= 0, then
  /// x_{n-1} - x_n + L0 <= 0 for n = 2..N.
  static LinearConstraints apv(int antennas, double aperture,
                               double min_spacing);

  RealVec values(const RealVec& x) const { return coefficients * x + offsets; }
  const RealMat& jacobian() const { return coefficients; }
  Eigen::Index count() const { return offsets.size(); }
  Eigen::Index dimension() const { return coefficients.cols(); }
};

/// g(x) built from a fixed (b, m). Construct a new one whenever b or m
/// changes; the weights are never refreshed in place.
class ApvObjective final : public SmoothObjective {
 public:
  ApvObjective(const ComplexVec& b, const ComplexVec& m,
               const Scenario& scenario);
  ApvObjective(EffectiveWeights weights, double aperture, double min_spacing);

  /// Double-sum cosine form of F_k.
  double eval_F(int k, const RealVec& x) const;
  /// 2 * sum_n |w_{k,n}| cos(phi_k x_n - arg w_{k,n}).
  double eval_G(int k, const RealVec& x) const;

  double value(const RealVec& x) const override;
  RealVec gradient(const RealVec& x) const override;
  RealMat hessian(const RealVec& x) const override;

  /// sum_k |w_k^H a(x, theta_k) - 1|^2, i.e. value(x) + K.
  double residual_sum(const RealVec& x) const { return value(x) + users(); }

  const EffectiveWeights& weights() const { return weights_; }
  const LinearConstraints& constraints() const { return constraints_; }
  int users() const { return weights_.users(); }
  int antennas() const { return weights_.antennas(); }
  double aperture() const { return aperture_; }
  double min_spacing() const { return min_spacing_; }

 private:
  EffectiveWeights weights_;
  LinearConstraints constraints_;
  double aperture_;
  double min_spacing_;
};

}  // namespace fluidair
