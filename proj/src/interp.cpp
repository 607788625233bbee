#include "gpplan/interp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace gpplan {

namespace {

constexpr double kSnapTol = 1e-9;  // relative to dt when snapping tau to a support time

}  // namespace

InterpCoeffs lambdaPsi(const GaussMarkovModel& model, double t_i, double t_ip1, double tau) {
  const double dt = t_ip1 - t_i;
  if (dt <= 0.0) throw std::invalid_argument("lambdaPsi: need t_i < t_ip1");
  if (tau < t_i - kSnapTol * dt || tau > t_ip1 + kSnapTol * dt)
    throw std::invalid_argument("lambdaPsi: tau outside [t_i, t_ip1]");

  const int s = model.stateDim();
  InterpCoeffs out;
  out.tau = tau;
  const double a = tau - t_i;
  if (a <= kSnapTol * dt) {
    out.lambda = Eigen::MatrixXd::Identity(s, s);
    out.psi = Eigen::MatrixXd::Zero(s, s);
    return out;
  }
  if (t_ip1 - tau <= kSnapTol * dt) {
    out.lambda = Eigen::MatrixXd::Zero(s, s);
    out.psi = Eigen::MatrixXd::Identity(s, s);
    return out;
  }

  const Eigen::MatrixXd q_tau = processNoise(model, a);
  const Eigen::MatrixXd phi_rest = transitionMatrix(model, dt - a);
  Eigen::LLT<Eigen::MatrixXd> q_full(processNoise(model, dt));
  if (q_full.info() != Eigen::Success) throw std::runtime_error("lambdaPsi: Q not SPD");
  out.psi = q_full.solve(phi_rest * q_tau.transpose()).transpose();
  out.lambda = transitionMatrix(model, a) - out.psi * transitionMatrix(model, dt);
  return out;
}

StateVector interpolateState(const Trajectory& traj, const TrajectoryPrior& prior, double tau) {
  const auto& times = traj.times;
  const double dt = prior.dt();
  if (tau < times.front() - kSnapTol * dt || tau > times.back() + kSnapTol * dt)
    throw std::invalid_argument("interpolateState: tau out of range");

  int seg = static_cast<int>(std::floor((tau - times.front()) / dt));
  seg = std::max(0, std::min(seg, prior.numSegments() - 1));
  // Exact support-state passthrough.
  for (int k : {seg, seg + 1}) {
    if (std::abs(tau - times[k]) <= kSnapTol * dt) return traj.states[k];
  }

  const InterpCoeffs c = lambdaPsi(prior.model, times[seg], times[seg + 1], tau);
  const StateVector dev_i = traj.states[seg] - prior.mean.states[seg];
  const StateVector dev_j = traj.states[seg + 1] - prior.mean.states[seg + 1];
  const StateVector mean_tau =
      c.lambda * prior.mean.states[seg] + c.psi * prior.mean.states[seg + 1];
  return mean_tau + c.lambda * dev_i + c.psi * dev_j;
}

UpsampleOperator buildUpsample(const TrajectoryPrior& prior, int n_ip) {
  if (n_ip < 0) throw std::invalid_argument("buildUpsample: n_ip must be >= 0");
  UpsampleOperator op;
  op.n_ip = n_ip;
  op.num_segments = prior.numSegments();
  op.state_dim = prior.stateDim();

  const double dt = prior.dt();
  const double t0 = prior.mean.times.front();
  op.coeffs.reserve(n_ip);
  for (int j = 1; j <= n_ip; ++j) {
    const double offset = dt * j / (n_ip + 1);
    op.coeffs.push_back(lambdaPsi(prior.model, 0.0, dt, offset));
  }
  op.times.reserve(op.numOutputStates());
  for (int i = 0; i < op.num_segments; ++i) {
    op.times.push_back(t0 + i * dt);
    for (int j = 1; j <= n_ip; ++j) op.times.push_back(t0 + i * dt + dt * j / (n_ip + 1));
  }
  op.times.push_back(t0 + op.num_segments * dt);
  return op;
}

Trajectory upsample(const UpsampleOperator& op, const Trajectory& traj,
                    const TrajectoryPrior& prior) {
  if (traj.numStates() != op.num_segments + 1 || traj.stateDim() != op.state_dim)
    throw std::invalid_argument("upsample: trajectory does not match operator");

  Trajectory out;
  out.dof = traj.dof;
  out.order = traj.order;
  out.times = op.times;
  out.states.reserve(op.numOutputStates());
  for (int i = 0; i < op.num_segments; ++i) {
    out.states.push_back(traj.states[i]);
    const StateVector dev_i = traj.states[i] - prior.mean.states[i];
    const StateVector dev_j = traj.states[i + 1] - prior.mean.states[i + 1];
    for (const auto& c : op.coeffs) {
      const StateVector mean_tau =
          c.lambda * prior.mean.states[i] + c.psi * prior.mean.states[i + 1];
      out.states.push_back(mean_tau + c.lambda * dev_i + c.psi * dev_j);
    }
  }
  out.states.push_back(traj.states.back());
  return out;
}

std::vector<Eigen::VectorXd> projectGradient(const UpsampleOperator& op,
                                             const std::vector<Eigen::VectorXd>& g_up) {
  if (static_cast<int>(g_up.size()) != op.numOutputStates())
    throw std::invalid_argument("projectGradient: gradient length does not match operator");

  std::vector<Eigen::VectorXd> out(op.num_segments + 1,
                                   Eigen::VectorXd::Zero(op.state_dim));
  int row = 0;
  for (int i = 0; i < op.num_segments; ++i) {
    out[i] += g_up[row++];  // identity row at the support time
    for (const auto& c : op.coeffs) {
      out[i] += c.lambda.transpose() * g_up[row];
      out[i + 1] += c.psi.transpose() * g_up[row];
      ++row;
    }
  }
  out[op.num_segments] += g_up[row];
  return out;
}

}  // namespace gpplan
