#include "fluidair/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fluidair {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void require_positive(const RealVec& v, const char* name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << name << "[" << i << "] must be positive and finite, got " << v[i];
      fail(os.str());
    }
  }
}

}  // namespace

Apv Apv::checked(RealVec positions, double aperture, double min_spacing) {
  if (positions.size() == 0) fail("Apv: empty position vector");
  if (!positions.allFinite()) fail("Apv: non-finite position");
  if (!is_feasible(positions, aperture, min_spacing)) {
    std::ostringstream os;
    os << "Apv: positions [" << positions.transpose()
       << "] violate box [0, " << aperture << "] or spacing " << min_spacing;
    fail(os.str());
  }
  return Apv(std::move(positions));
}

bool is_feasible(const RealVec& x, double aperture, double min_spacing,
                 double tol) {
  const Eigen::Index n = x.size();
  if (n == 0) return false;
  if (x[0] < -tol || x[n - 1] > aperture + tol) return false;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (x[i] - x[i - 1] < min_spacing - tol) return false;
  }
  return true;
}

void Scenario::validate() const {
  const auto k = alphas.size();
  if (k == 0) fail("Scenario: no users");
  if (thetas.size() != k || powers.size() != k) {
    fail("Scenario: alphas, thetas and powers must have the same length");
  }
  if (antennas < 1) fail("Scenario: antennas must be >= 1");
  require_positive(alphas, "alphas");
  require_positive(powers, "powers");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(thetas[i] > 0.0 && thetas[i] < std::numbers::pi)) {
      fail("Scenario: thetas must lie in (0, pi)");
    }
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    fail("Scenario: sigma2 must be positive");
  }
  if (!(min_spacing >= 0.0)) fail("Scenario: min_spacing must be >= 0");
  if (aperture < (antennas - 1) * min_spacing) {
    fail("Scenario: aperture too short for the minimum spacing");
  }
}

EffectiveWeights EffectiveWeights::build(const ComplexVec& b,
                                         const ComplexVec& m,
                                         const Scenario& scenario) {
  const int k_users = scenario.users();
  if (b.size() != k_users || m.size() != scenario.antennas) {
    fail("EffectiveWeights: dimension mismatch");
  }
  EffectiveWeights w;
  w.magnitude.resize(k_users, m.size());
  w.phase.resize(k_users, m.size());
  w.frequency.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    const Complex scale = scenario.alphas[k] * std::conj(b[k]);
    for (Eigen::Index n = 0; n < m.size(); ++n) {
      const Complex wkn = scale * m[n];
      w.magnitude(k, n) = std::abs(wkn);
      w.phase(k, n) = std::arg(wkn);
    }
    w.frequency[k] = kTwoPi * std::cos(scenario.thetas[k]);
  }
  return w;
}

ComplexVec EffectiveWeights::vector(int k) const {
  ComplexVec out(antennas());
  for (int n = 0; n < antennas(); ++n) {
    out[n] = std::polar(magnitude(k, n), phase(k, n));
  }
  return out;
}

ComplexVec steering_vector(const RealVec& x, double theta) {
  const double freq = kTwoPi * std::cos(theta);
  ComplexVec a(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    a[n] = std::polar(1.0, freq * x[n]);
  }
  return a;
}

ComplexVec channel(const Scenario& scenario, int k, const RealVec& x) {
  if (k < 0 || k >= scenario.users()) {
    throw std::out_of_range("channel: user index out of range");
  }
  return scenario.alphas[k] * steering_vector(x, scenario.thetas[k]);
}

double mse(const ComplexVec& b, const ComplexVec& m, const Scenario& scenario,
           const RealVec& x) {
  if (b.size() != scenario.users() || m.size() != scenario.antennas ||
      x.size() != scenario.antennas) {
    fail("mse: dimension mismatch");
  }
  double total = scenario.sigma2 * m.squaredNorm();
  for (int k = 0; k < scenario.users(); ++k) {
    const Complex gain = m.dot(channel(scenario, k, x));  // m^H h_k
    total += std::norm(gain * b[k] - 1.0);
  }
  return total;
}

void ScenarioParams::validate() const {
  if (antennas < 1) fail("antennas must be >= 1");
  if (users < 1) fail("users must be >= 1");
  if (!(p0 > 0.0)) fail("p0 must be positive");
  if (!(alpha_min > 0.0) || !(alpha_max >= alpha_min)) {
    fail("need 0 < alpha_min <= alpha_max");
  }
  if (!std::isfinite(snr_db)) fail("snr_db must be finite");
  if (aperture_per_antenna * antennas < (antennas - 1) * min_spacing) {
    fail("aperture too short for the minimum spacing");
  }
}

Scenario sample_scenario(const ScenarioParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> gain(params.alpha_min,
                                              params.alpha_max);
  Scenario s;
  s.antennas = params.antennas;
  s.alphas.resize(params.users);
  s.thetas.resize(params.users);
  s.powers = RealVec::Constant(params.users, params.p0);
  for (int k = 0; k < params.users; ++k) {
    s.thetas[k] = std::clamp(angle(rng), kThetaMargin,
                             std::numbers::pi - kThetaMargin);
    s.alphas[k] = gain(rng);
  }
  s.sigma2 = params.p0 / std::pow(10.0, params.snr_db / 10.0);
  s.aperture = params.aperture_per_antenna * params.antennas;
  s.min_spacing = params.min_spacing;
  s.validate();
  return s;
}

RealVec uniform_positions(int antennas, double aperture) {
  if (antennas < 1) fail("uniform_positions: antennas must be >= 1");
  if (antennas == 1) return RealVec::Zero(1);
  return RealVec::LinSpaced(antennas, 0.0, aperture);
}

RealVec interior_uniform_positions(int antennas, double aperture) {
  if (antennas < 1) fail("interior_uniform_positions: antennas must be >= 1");
  if (antennas == 1) return RealVec::Constant(1, 0.5 * aperture);
  const double margin = 1e-3 * aperture;
  return RealVec::LinSpaced(antennas, margin, aperture - margin);
}

}  // namespace fluidair
