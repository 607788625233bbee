#include "gpplan/prior.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace gpplan {

TrajectoryPrior buildPrior(const GaussMarkovModel& model, const StateVector& start,
                           const StateVector& goal, int num_segments, double total_time,
                           const Eigen::MatrixXd& k0, const Eigen::MatrixXd& kn) {
  if (num_segments < 1) throw std::invalid_argument("buildPrior: need at least one segment");
  if (total_time <= 0.0) throw std::invalid_argument("buildPrior: total_time must be > 0");
  const int s = model.stateDim();
  const int d = model.dof;
  if (start.size() != s || goal.size() != s)
    throw std::invalid_argument("buildPrior: start/goal dimension does not match model");
  if (k0.rows() != s || k0.cols() != s || kn.rows() != s || kn.cols() != s)
    throw std::invalid_argument("buildPrior: endpoint covariance dimension mismatch");

  const double dt = total_time / num_segments;
  TrajectoryPrior prior;
  prior.model = model;
  prior.k0 = k0;
  prior.kn = kn;

  const Eigen::VectorXd line_vel = (goal.head(d) - start.head(d)) / total_time;
  prior.mean.dof = d;
  prior.mean.order = model.order();
  prior.mean.states.reserve(num_segments + 1);
  prior.mean.times.reserve(num_segments + 1);
  for (int i = 0; i <= num_segments; ++i) {
    const double t = i * dt;
    StateVector x = StateVector::Zero(s);
    x.head(d) = start.head(d) + t * line_vel;
    x.segment(d, d) = line_vel;
    prior.mean.states.push_back(std::move(x));
    prior.mean.times.push_back(t);
  }

  prior.phi.assign(num_segments, transitionMatrix(model, dt));
  prior.q.assign(num_segments, processNoise(model, dt));
  return prior;
}

TrajectoryPrior buildPrior(const GaussMarkovModel& model, const StateVector& start,
                           const StateVector& goal, int num_segments, double total_time,
                           double endpoint_sigma) {
  const int s = model.stateDim();
  const Eigen::MatrixXd cov =
      endpoint_sigma * endpoint_sigma * Eigen::MatrixXd::Identity(s, s);
  return buildPrior(model, start, goal, num_segments, total_time, cov, cov);
}

namespace {

Eigen::MatrixXd invertSpd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw std::runtime_error(std::string(what) + ": not SPD");
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

BlockTridiagonal precision(const TrajectoryPrior& prior) {
  const int n = prior.numSegments();
  const int s = static_cast<int>(prior.phi.front().rows());
  BlockTridiagonal out = BlockTridiagonal::zero(n + 1, s);

  out.diag[0] += invertSpd(prior.k0, "precision: k0");
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd qinv = invertSpd(prior.q[i], "precision: q block");
    out.diag[i] += prior.phi[i].transpose() * qinv * prior.phi[i];
    out.diag[i + 1] += qinv;
    out.sub_diag[i] = -qinv * prior.phi[i];
  }
  out.diag[n] += invertSpd(prior.kn, "precision: kn");
  return out;
}

Eigen::MatrixXd denseKernelOracle(const TrajectoryPrior& prior) {
  const int n = prior.numSegments();
  const int s = static_cast<int>(prior.phi.front().rows());
  const int dim = (n + 1) * s;

  // Accumulated covariance P_i of the unconditioned process at each support
  // time, and cross terms K(t_i, t_j) = P_i Phi(t_j, t_i)^T for i <= j.
  std::vector<Eigen::MatrixXd> p(n + 1);
  p[0] = prior.k0;
  for (int i = 0; i < n; ++i)
    p[i + 1] = prior.phi[i] * p[i] * prior.phi[i].transpose() + prior.q[i];

  Eigen::MatrixXd kernel(dim, dim);
  for (int i = 0; i <= n; ++i) {
    Eigen::MatrixXd cross = p[i];  // K(t_i, t_j), growing j from i
    kernel.block(i * s, i * s, s, s) = cross;
    for (int j = i + 1; j <= n; ++j) {
      cross = cross * prior.phi[j - 1].transpose();
      kernel.block(i * s, j * s, s, s) = cross;
      kernel.block(j * s, i * s, s, s) = cross.transpose();
    }
  }

  // Condition on a fictitious goal observation with covariance kn.
  const Eigen::MatrixXd last_col = kernel.block(0, n * s, dim, s);
  const Eigen::MatrixXd gram = kernel.block(n * s, n * s, s, s) + prior.kn;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("denseKernelOracle: goal gram matrix not SPD");
  return kernel - last_col * llt.solve(last_col.transpose());
}

double priorCost(const Trajectory& traj, const TrajectoryPrior& prior) {
  const int n = prior.numSegments();
  const int s = prior.stateDim();
  if (traj.numStates() != n + 1 || traj.stateDim() != s)
    throw std::invalid_argument("priorCost: trajectory does not match prior");

  // Residuals are taken on deviations from the mean so the factored form
  // matches the dense quadratic form for any mean.
  auto dev = [&](int i) -> Eigen::VectorXd { return traj.states[i] - prior.mean.states[i]; };

  double cost = 0.0;
  Eigen::LLT<Eigen::MatrixXd> k0(prior.k0);
  cost += 0.5 * dev(0).dot(k0.solve(dev(0)));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd r = prior.phi[i] * dev(i) - dev(i + 1);
    Eigen::LLT<Eigen::MatrixXd> qi(prior.q[i]);
    cost += 0.5 * r.dot(qi.solve(r));
  }
  Eigen::LLT<Eigen::MatrixXd> kn(prior.kn);
  cost += 0.5 * dev(n).dot(kn.solve(dev(n)));
  return cost;
}

Eigen::VectorXd gpResidual(const StateVector& state_i, const StateVector& state_j,
                           const TrajectoryPrior& prior, int segment) {
  if (segment < 0 || segment >= prior.numSegments())
    throw std::invalid_argument("gpResidual: segment out of range");
  return prior.phi[segment] * state_i - state_j;
}

StateVector priorMeanAt(const TrajectoryPrior& prior, double tau) {
  const auto& times = prior.mean.times;
  if (tau < times.front() - 1e-12 || tau > times.back() + 1e-12)
    throw std::invalid_argument("priorMeanAt: tau out of range");
  const double dt = prior.dt();
  int seg = static_cast<int>(std::floor((tau - times.front()) / dt));
  seg = std::max(0, std::min(seg, prior.numSegments() - 1));
  // The straight-line mean satisfies exact propagation, so propagating from
  // the left support state reproduces it at any time.
  return transitionMatrix(prior.model, tau - times[seg]) * prior.mean.states[seg];
}

}  // namespace gpplan
