#pragma once

#include <Eigen/Dense>
#include <random>

#include "gpplan/prior.hpp"

namespace gpplan::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::VectorXd randomVector(int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
  return v;
}

// Random prior over a random model; small sizes keep dense oracles cheap.
inline TrajectoryPrior randomPrior(int max_n = 10, int max_d = 3) {
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng());
  const int d = std::uniform_int_distribution<int>(1, max_d)(rng());
  GaussMarkovModel model;
  model.kind = std::uniform_int_distribution<int>(0, 1)(rng()) == 0
                   ? ModelKind::ConstantVelocity
                   : ModelKind::ConstantAcceleration;
  model.dof = d;
  model.qc = uniform(0.1, 10.0);
  const int s = model.stateDim();
  const Eigen::VectorXd start = randomVector(s);
  const Eigen::VectorXd goal = randomVector(s);
  const double total_time = uniform(0.5, 5.0);
  return buildPrior(model, start, goal, n, total_time, uniform(0.005, 0.1));
}

// Random trajectory: prior mean plus random deviations.
inline Trajectory randomTrajectory(const TrajectoryPrior& prior, double scale = 1.0) {
  Trajectory traj = prior.mean;
  for (auto& state : traj.states) state += randomVector(prior.stateDim(), scale);
  return traj;
}

// Dense unconditioned kernel of the prior over the support times, built by
// accumulating covariance along the chain (independent of precision()).
inline Eigen::MatrixXd denseUnconditionedKernel(const TrajectoryPrior& prior) {
  const int n = prior.numSegments();
  const int s = prior.stateDim();
  std::vector<Eigen::MatrixXd> p(n + 1);
  p[0] = prior.k0;
  for (int i = 0; i < n; ++i)
    p[i + 1] = prior.phi[i] * p[i] * prior.phi[i].transpose() + prior.q[i];
  Eigen::MatrixXd kernel((n + 1) * s, (n + 1) * s);
  for (int i = 0; i <= n; ++i) {
    Eigen::MatrixXd cross = p[i];
    kernel.block(i * s, i * s, s, s) = cross;
    for (int j = i + 1; j <= n; ++j) {
      cross = cross * prior.phi[j - 1].transpose();
      kernel.block(i * s, j * s, s, s) = cross;
      kernel.block(j * s, i * s, s, s) = cross.transpose();
    }
  }
  return kernel;
}

// Cross-covariance block row K(tau, t_0..t_N) of the unconditioned process,
// for tau inside segment `seg`. Uses the same accumulation convention as the
// kernel above.
inline Eigen::MatrixXd denseCrossRow(const TrajectoryPrior& prior, double tau, int seg) {
  const int n = prior.numSegments();
  const int s = prior.stateDim();
  const Eigen::MatrixXd kernel = denseUnconditionedKernel(prior);
  const double a = tau - prior.mean.times[seg];
  const Eigen::MatrixXd phi_a = transitionMatrix(prior.model, a);

  Eigen::MatrixXd row(s, (n + 1) * s);
  for (int j = 0; j <= seg; ++j)
    row.block(0, j * s, s, s) = phi_a * kernel.block(seg * s, j * s, s, s);

  // Covariance at tau as an offshoot of the support chain.
  Eigen::MatrixXd p_seg = kernel.block(seg * s, seg * s, s, s);
  Eigen::MatrixXd p_tau = phi_a * p_seg * phi_a.transpose() + processNoise(prior.model, a);
  Eigen::MatrixXd cross = p_tau;
  for (int j = seg + 1; j <= n; ++j) {
    const double dt_j = prior.mean.times[j] - (j == seg + 1 ? tau : prior.mean.times[j - 1]);
    cross = cross * transitionMatrix(prior.model, dt_j).transpose();
    row.block(0, j * s, s, s) = cross;
  }
  return row;
}

// Full GP regression at tau: mean(tau) + K(tau, t) K^-1 (theta - mean).
inline Eigen::VectorXd denseRegression(const TrajectoryPrior& prior, const Trajectory& traj,
                                       double tau) {
  const int n = prior.numSegments();
  const int s = prior.stateDim();
  int seg = static_cast<int>(std::floor((tau - prior.mean.times.front()) / prior.dt()));
  seg = std::max(0, std::min(seg, n - 1));

  const Eigen::MatrixXd kernel = denseUnconditionedKernel(prior);
  const Eigen::MatrixXd row = denseCrossRow(prior, tau, seg);
  Eigen::VectorXd dev((n + 1) * s);
  for (int i = 0; i <= n; ++i) dev.segment(i * s, s) = traj.states[i] - prior.mean.states[i];
  const Eigen::VectorXd mean_tau =
      transitionMatrix(prior.model, tau - prior.mean.times[seg]) * prior.mean.states[seg];
  return mean_tau + row * kernel.ldlt().solve(dev);
}

inline double maxAbs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

inline double relativeError(const Eigen::VectorXd& actual, const Eigen::VectorXd& expected) {
  const double denom = std::max(expected.norm(), 1e-300);
  return (actual - expected).norm() / denom;
}

}  // namespace gpplan::testing
