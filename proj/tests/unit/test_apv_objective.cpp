#include "fluidair/apv_objective.hpp"

#include "instances.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace fluidair {
namespace {

using testing::random_complex;
using testing::random_scenario;

struct Instance {
  Scenario scenario;
  ComplexVec b, m;
  RealVec x;
};

Instance random_instance(std::mt19937_64& rng, int n, int k) {
  Instance in;
  in.scenario = random_scenario(rng, n, k);
  in.b = random_complex(rng, k);
  in.m = random_complex(rng, n, 0.4);
  in.x = testing::random_feasible(rng, n, in.scenario.aperture, 0.5);
  return in;
}

TEST(LinearConstraints, TwoAntennaExample) {
  const LinearConstraints c = LinearConstraints::apv(2, 2.0, 0.5);
  RealVec x(2);
  x << 0.0, 2.0;
  const RealVec f = c.values(x);
  ASSERT_EQ(f.size(), 3);
  EXPECT_DOUBLE_EQ(f[0], 0.0);
  EXPECT_DOUBLE_EQ(f[1], 0.0);
  EXPECT_DOUBLE_EQ(f[2], -1.5);
  x << 1.0, 1.2;
  EXPECT_NEAR(c.values(x)[2], 0.3, 1e-15);
}

TEST(LinearConstraints, MatchesIndependentConstruction) {
  for (int n = 1; n <= 6; ++n) {
    RealMat A;
    RealVec b;
    oracles::apv_constraints(n, 4.0, 0.5, A, b);
    const LinearConstraints c = LinearConstraints::apv(n, 4.0, 0.5);
    EXPECT_EQ(c.coefficients, A);
    EXPECT_EQ(c.offsets, b);
    EXPECT_EQ(c.count(), n + 1);
  }
  EXPECT_THROW(LinearConstraints::apv(0, 1.0, 0.5), std::invalid_argument);
}

TEST(ApvObjective, SumsMatchSteeringVectorEvaluation) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = random_instance(rng, 5, 4);
    const ApvObjective obj(in.b, in.m, in.scenario);
    RealVec x = in.x;
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      const ComplexVec w = obj.weights().vector(k);
      const Complex inner = w.dot(steering_vector(x, in.scenario.thetas[k]));
      EXPECT_NEAR(obj.eval_F(k, x), std::norm(inner), 1e-10);
      EXPECT_NEAR(obj.eval_G(k, x), 2.0 * inner.real(), 1e-10);
      total += obj.eval_F(k, x) - obj.eval_G(k, x);
    }
    EXPECT_NEAR(obj.value(x), total, 1e-10);
    EXPECT_NEAR(obj.residual_sum(x),
                oracles::direct_residual_sum(obj.weights(), in.scenario.thetas, x),
                1e-10);
  }
}

TEST(ApvObjective, ResidualSumPlusNoiseIsMse) {
  std::mt19937_64 rng(32);
  const Instance in = random_instance(rng, 4, 3);
  const ApvObjective obj(in.b, in.m, in.scenario);
  EXPECT_NEAR(obj.residual_sum(in.x) + in.scenario.sigma2 * in.m.squaredNorm(),
              mse(in.b, in.m, in.scenario, in.x), 1e-11);
}

TEST(ApvObjective, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = random_instance(rng, 4, 3);
    const ApvObjective obj(in.b, in.m, in.scenario);
    auto f = [&](const RealVec& x) { return obj.value(x); };
    auto g = [&](const RealVec& x) { return obj.gradient(x); };
    const RealVec grad = obj.gradient(in.x);
    const RealVec fd = oracles::fd_gradient(f, in.x, 1e-6);
    EXPECT_LT((grad - fd).norm(), 1e-6 * (1.0 + grad.norm()));
    const RealMat hess = obj.hessian(in.x);
    const RealMat fdh = oracles::fd_jacobian(g, in.x, 1e-6);
    EXPECT_LT((hess - fdh).norm(), 1e-5 * (1.0 + hess.norm()));
    EXPECT_LT((hess - hess.transpose()).norm(), 1e-12 * (1.0 + hess.norm()));
  }
}

TEST(ApvObjective, ZeroWeightsGiveZeroObjective) {
  std::mt19937_64 rng(34);
  const Scenario s = random_scenario(rng, 3, 2);
  const ApvObjective obj(random_complex(rng, 2), ComplexVec::Zero(3), s);
  const RealVec x = uniform_positions(3, s.aperture);
  EXPECT_EQ(obj.value(x), 0.0);
  EXPECT_EQ(obj.gradient(x).norm(), 0.0);
  EXPECT_DOUBLE_EQ(obj.residual_sum(x), 2.0);
}

TEST(ApvObjective, BroadsideUserIsPositionIndependent) {
  std::mt19937_64 rng(35);
  Scenario s = random_scenario(rng, 3, 1);
  s.thetas[0] = std::acos(0.0);
  const ApvObjective obj(random_complex(rng, 1), random_complex(rng, 3), s);
  const RealVec x1 = uniform_positions(3, s.aperture);
  const RealVec x2 = testing::random_feasible(rng, 3, s.aperture, 0.5);
  EXPECT_NEAR(obj.value(x1), obj.value(x2), 1e-12);
  EXPECT_LT(obj.gradient(x2).norm(), 1e-12);
}

}  // namespace
}  // namespace fluidair
