#include "fluidair/apv_objective.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidair {

LinearConstraints LinearConstraints::apv(int antennas, double aperture,
                                         double min_spacing) {
  if (antennas < 1) throw std::invalid_argument("apv constraints: N >= 1");
  LinearConstraints c;
  c.coefficients = RealMat::Zero(antennas + 1, antennas);
  c.offsets = RealVec::Zero(antennas + 1);
  c.coefficients(0, 0) = -1.0;
  c.coefficients(1, antennas - 1) = 1.0;
  c.offsets[1] = -aperture;
  for (int n = 1; n < antennas; ++n) {
    c.coefficients(n + 1, n - 1) = 1.0;
    c.coefficients(n + 1, n) = -1.0;
    c.offsets[n + 1] = min_spacing;
  }
  return c;
}

ApvObjective::ApvObjective(const ComplexVec& b, const ComplexVec& m,
                           const Scenario& scenario)
    : ApvObjective(EffectiveWeights::build(b, m, scenario), scenario.aperture,
                   scenario.min_spacing) {}

ApvObjective::ApvObjective(EffectiveWeights weights, double aperture,
                           double min_spacing)
    : weights_(std::move(weights)),
      constraints_(LinearConstraints::apv(weights_.antennas(), aperture,
                                          min_spacing)),
      aperture_(aperture),
      min_spacing_(min_spacing) {}

double ApvObjective::eval_F(int k, const RealVec& x) const {
  const auto& mag = weights_.magnitude;
  const auto& ph = weights_.phase;
  const double phi = weights_.frequency[k];
  double total = 0.0;
  for (int n = 0; n < antennas(); ++n) {
    for (int l = 0; l < antennas(); ++l) {
      const double q = phi * (x[n] - x[l]) - (ph(k, n) - ph(k, l));
      total += mag(k, n) * mag(k, l) * std::cos(q);
    }
  }
  return total;
}

double ApvObjective::eval_G(int k, const RealVec& x) const {
  const double phi = weights_.frequency[k];
  double total = 0.0;
  for (int n = 0; n < antennas(); ++n) {
    total += weights_.magnitude(k, n) *
             std::cos(phi * x[n] - weights_.phase(k, n));
  }
  return 2.0 * total;
}

// Per user, e_n = |w_{k,n}| exp(j(phi_k x_n - arg w_{k,n})) and s = sum_n e_n.
// Then F_k = |s|^2 and G_k = 2 Re s, which gives
//   dF/dx_n = -2 phi Im(e_n s*),          dG/dx_n = -2 phi Im(e_n),
//   d2F/dx_n dx_l = 2 phi^2 [Re(e_n e_l*) - delta_nl Re(e_n s*)],
//   d2G/dx_n^2 = -2 phi^2 Re(e_n).
namespace {

struct UserTerms {
  RealVec re, im;
  double s_re = 0.0, s_im = 0.0;
};

void user_terms(const EffectiveWeights& w, int k, const RealVec& x,
                UserTerms& t) {
  const int n_ant = w.antennas();
  const double phi = w.frequency[k];
  t.re.resize(n_ant);
  t.im.resize(n_ant);
  t.s_re = t.s_im = 0.0;
  for (int n = 0; n < n_ant; ++n) {
    const double u = phi * x[n] - w.phase(k, n);
    t.re[n] = w.magnitude(k, n) * std::cos(u);
    t.im[n] = w.magnitude(k, n) * std::sin(u);
    t.s_re += t.re[n];
    t.s_im += t.im[n];
  }
}

}  // namespace

double ApvObjective::value(const RealVec& x) const {
  UserTerms t;
  double total = 0.0;
  for (int k = 0; k < users(); ++k) {
    user_terms(weights_, k, x, t);
    total += t.s_re * t.s_re + t.s_im * t.s_im - 2.0 * t.s_re;
  }
  return total;
}

RealVec ApvObjective::gradient(const RealVec& x) const {
  UserTerms t;
  RealVec grad = RealVec::Zero(antennas());
  for (int k = 0; k < users(); ++k) {
    user_terms(weights_, k, x, t);
    const double phi = weights_.frequency[k];
    // Im(e_n s*) = im_n s_re - re_n s_im
    for (int n = 0; n < antennas(); ++n) {
      const double cross = t.im[n] * t.s_re - t.re[n] * t.s_im;
      grad[n] += -2.0 * phi * cross + 2.0 * phi * t.im[n];
    }
  }
  return grad;
}

RealMat ApvObjective::hessian(const RealVec& x) const {
  UserTerms t;
  RealMat hess = RealMat::Zero(antennas(), antennas());
  for (int k = 0; k < users(); ++k) {
    user_terms(weights_, k, x, t);
    const double c = 2.0 * weights_.frequency[k] * weights_.frequency[k];
    hess.noalias() += c * (t.re * t.re.transpose() + t.im * t.im.transpose());
    for (int n = 0; n < antennas(); ++n) {
      // Re(e_n s*) = re_n s_re + im_n s_im
      const double diag = t.re[n] * t.s_re + t.im[n] * t.s_im;
      hess(n, n) += c * (t.re[n] - diag);
    }
  }
  return hess;
}

}  // namespace fluidair
