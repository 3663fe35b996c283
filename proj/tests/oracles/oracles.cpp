#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fluidair::oracles {

RealVec fd_gradient(const ScalarFn& fun, const RealVec& x, double h) {
  RealVec g(x.size());
  RealVec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = fun(probe);
    probe[i] = x[i] - h;
    const double down = fun(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

RealMat fd_hessian(const ScalarFn& fun, const RealVec& x, double h) {
  const Eigen::Index n = x.size();
  RealMat H(n, n);
  RealVec p = x;
  const double f0 = fun(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = x[i] + h;
    const double fp = fun(p);
    p[i] = x[i] - h;
    const double fm = fun(p);
    p[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        p[i] = x[i] + si * h;
        p[j] = x[j] + sj * h;
        const double v = fun(p);
        p[i] = x[i];
        p[j] = x[j];
        return v;
      };
      H(i, j) = H(j, i) =
          (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
    }
  }
  return H;
}

RealMat fd_jacobian(const VectorFn& fun, const RealVec& x, double h) {
  RealVec p = x;
  RealMat J;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const RealVec up = fun(p);
    p[i] = x[i] - h;
    const RealVec down = fun(p);
    p[i] = x[i];
    if (i == 0) J.resize(up.size(), x.size());
    J.col(i) = (up - down) / (2.0 * h);
  }
  return J;
}

Complex brute_force_b(const ComplexVec& m, const ComplexVec& h, double power,
                      int mags, int phases) {
  Complex gain(0.0, 0.0);
  for (Eigen::Index n = 0; n < m.size(); ++n) gain += std::conj(m[n]) * h[n];
  const double radius = std::sqrt(power);
  Complex best(0.0, 0.0);
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mags; ++i) {
    const double r = radius * i / (mags - 1);
    for (int j = 0; j < phases; ++j) {
      const Complex b = std::polar(r, 2.0 * std::numbers::pi * j / phases);
      const double val = std::norm(gain * b - 1.0);
      if (val < best_val) {
        best_val = val;
        best = b;
      }
    }
  }
  return best;
}

double direct_residual_sum(const EffectiveWeights& weights,
                           const RealVec& thetas, const RealVec& x) {
  double total = 0.0;
  for (int k = 0; k < weights.users(); ++k) {
    const ComplexVec w = weights.vector(k);
    const ComplexVec a = steering_vector(x, thetas[k]);
    Complex inner(0.0, 0.0);
    for (Eigen::Index n = 0; n < x.size(); ++n) inner += std::conj(w[n]) * a[n];
    total += std::norm(inner - 1.0);
  }
  return total;
}

namespace {

void grid_recurse(const ScalarFn& fun, RealVec& x, int depth, double lower,
                  double aperture, double min_spacing, double res,
                  GridMinimum& best) {
  const int n = static_cast<int>(x.size());
  // Integer grid index keeps every coordinate on the common lattice.
  const long long first = static_cast<long long>(std::ceil(lower / res - 1e-9));
  const double room = (n - 1 - depth) * min_spacing;
  for (long long i = first;; ++i) {
    const double xi = i * res;
    if (xi + room > aperture + 1e-12) break;
    x[depth] = xi;
    if (depth + 1 == n) {
      ++best.points;
      const double v = fun(x);
      if (v < best.value) {
        best.value = v;
        best.x = x;
      }
    } else {
      grid_recurse(fun, x, depth + 1, xi + min_spacing, aperture, min_spacing,
                   res, best);
    }
  }
}

}  // namespace

GridMinimum grid_search_apv(const ScalarFn& fun, int antennas, double aperture,
                            double min_spacing, double resolution) {
  if (antennas < 1 || antennas > 3) {
    throw std::invalid_argument("grid_search_apv supports 1 <= N <= 3");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution > 0");
  GridMinimum best{RealVec(), std::numeric_limits<double>::infinity(), 0};
  RealVec x(antennas);
  grid_recurse(fun, x, 0, 0.0, aperture, min_spacing, resolution, best);
  if (best.points == 0) throw std::invalid_argument("grid has no feasible point");
  return best;
}

void apv_constraints(int antennas, double aperture, double min_spacing,
                     RealMat& A, RealVec& b) {
  A = RealMat::Zero(antennas + 1, antennas);
  b = RealVec::Zero(antennas + 1);
  A(0, 0) = -1.0;
  A(1, antennas - 1) = 1.0;
  b[1] = -aperture;
  for (int r = 2; r <= antennas; ++r) {
    A(r, r - 2) = 1.0;
    A(r, r - 1) = -1.0;
    b[r] = min_spacing;
  }
}

RealVec qp_active_set_reference(const RealMat& Q, const RealVec& c,
                                const RealMat& A, const RealVec& b) {
  const Eigen::Index n = Q.rows();
  const Eigen::Index m = A.rows();
  if (m > 12) throw std::invalid_argument("too many constraints to enumerate");
  const double scale = 1.0 + Q.cwiseAbs().maxCoeff() + c.cwiseAbs().maxCoeff();

  RealVec best;
  double best_val = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(active.size());
    if (s > n) continue;
    RealMat kkt = RealMat::Zero(n + s, n + s);
    RealVec rhs(n + s);
    kkt.topLeftCorner(n, n) = 2.0 * Q;
    rhs.head(n) = -c;
    for (Eigen::Index r = 0; r < s; ++r) {
      kkt.block(0, n + r, n, 1) = A.row(active[r]).transpose();
      kkt.block(n + r, 0, 1, n) = A.row(active[r]);
      rhs[n + r] = -b[active[r]];
    }
    Eigen::FullPivLU<RealMat> lu(kkt);
    if (lu.rank() < n + s) continue;
    const RealVec sol = lu.solve(rhs);
    const RealVec x = sol.head(n);
    const RealVec lambda = sol.tail(s);
    if ((A * x + b).maxCoeff() > 1e-9 * scale) continue;
    if (s > 0 && lambda.minCoeff() < -1e-9 * scale) continue;
    const double val = x.dot(Q * x) + c.dot(x);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  if (best.size() == 0) throw std::runtime_error("no KKT point found");
  return best;
}

}  // namespace fluidair::oracles
