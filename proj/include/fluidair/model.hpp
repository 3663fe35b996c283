// Fluid-antenna-array AirComp: domain types, line-of-sight channel model and
// the closed-form MSE objective.
//
// Positions are measured in wavelengths throughout, so the steering phase of
// antenna n towards angle theta is 2*pi*u_n*cos(theta).
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace fluidair {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

/// Absolute slack used when validating geometric feasibility.
inline constexpr double kFeasibilityTol = 1e-9;

/// Antenna position vector on the segment [0, aperture].
///
/// Constructed only through `checked`, which enforces ordering, the box and
/// the minimum spacing (within kFeasibilityTol). Solvers work on raw RealVec
/// candidates and wrap the accepted iterate.
class Apv {
 public:
  static Apv checked(RealVec positions, double aperture, double min_spacing);

  const RealVec& positions() const { return positions_; }
  Eigen::Index size() const { return positions_.size(); }
  double operator[](Eigen::Index n) const { return positions_[n]; }

 private:
  explicit Apv(RealVec positions) : positions_(std::move(positions)) {}
  RealVec positions_;
};

/// True when `x` satisfies 0 <= x_1, x_N <= aperture and the spacing rule.
bool is_feasible(const RealVec& x, double aperture, double min_spacing,
                 double tol = kFeasibilityTol);

/// One problem instance.
struct Scenario {
  RealVec alphas;       // propagation gains, > 0
  RealVec thetas;       // angles of arrival in (0, pi)
  RealVec powers;       // per-user power budgets, > 0
  double sigma2 = 1.0;  // receiver noise power, > 0
  int antennas = 1;
  double aperture = 1.0;     // segment length in wavelengths
  double min_spacing = 0.5;  // in wavelengths

  int users() const { return static_cast<int>(alphas.size()); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Per-user effective receive weights w_k = alpha_k * conj(b_k) * m, split
/// into magnitudes and phases, plus the spatial frequencies 2*pi*cos(theta_k).
struct EffectiveWeights {
  RealMat magnitude;  // K x N, |w_{k,n}|
  RealMat phase;      // K x N, arg w_{k,n}
  RealVec frequency;  // K

  static EffectiveWeights build(const ComplexVec& b, const ComplexVec& m,
                                const Scenario& scenario);

  int users() const { return static_cast<int>(magnitude.rows()); }
  int antennas() const { return static_cast<int>(magnitude.cols()); }
  ComplexVec vector(int k) const;  // w_k
};

struct TransceiverState {
  ComplexVec b;
  ComplexVec m;
  RealVec x;
  double mse = 0.0;
};

ComplexVec steering_vector(const RealVec& x, double theta);
inline ComplexVec steering_vector(const Apv& x, double theta) {
  return steering_vector(x.positions(), theta);
}

/// h_k = alpha_k * a(x, theta_k); k is zero-based.
ComplexVec channel(const Scenario& scenario, int k, const RealVec& x);

/// sum_k |m^H h_k b_k - 1|^2 + sigma^2 ||m||^2.
double mse(const ComplexVec& b, const ComplexVec& m, const Scenario& scenario,
           const RealVec& x);

/// Distribution knobs for random instances; P_k = p0 for every user and
/// sigma^2 = p0 / 10^(snr_db / 10).
struct ScenarioParams {
  int antennas = 10;
  int users = 10;
  double snr_db = -10.0;
  double p0 = 1.0;
  double alpha_min = 0.5;
  double alpha_max = 1.5;
  double aperture_per_antenna = 1.0;  // L = aperture_per_antenna * N
  double min_spacing = 0.5;

  void validate() const;
};

/// AoAs are drawn on (0, pi) and clamped to [1e-3, pi - 1e-3].
inline constexpr double kThetaMargin = 1e-3;

Scenario sample_scenario(const ScenarioParams& params, std::uint64_t seed);

/// Uniform grid spanning [0, aperture]: aperture/(N-1) * [0, ..., N-1]. A
/// single antenna sits at 0.
RealVec uniform_positions(int antennas, double aperture);

/// Uniform grid shrunk by 1e-3*aperture at both ends so that every box
/// constraint is strictly inactive. A single antenna sits at aperture/2.
RealVec interior_uniform_positions(int antennas, double aperture);

}  // namespace fluidair
