#pragma once

#include <Eigen/Core>
#include <vector>

#include "gpplan/block_tridiag.hpp"
#include "gpplan/gauss_markov.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

/// Gauss-Markov prior over a support-state trajectory: mean, per-segment
/// transition and process-noise blocks, and endpoint covariances. Immutable
/// after construction; safe to share across concurrent solves.
struct TrajectoryPrior {
  GaussMarkovModel model;
  Trajectory mean;
  std::vector<Eigen::MatrixXd> phi;  // N transition blocks Phi(t_{i+1}, t_i)
  std::vector<Eigen::MatrixXd> q;    // N process-noise blocks Q_{i,i+1}, SPD
  Eigen::MatrixXd k0;                // start covariance, SPD
  Eigen::MatrixXd kn;                // goal covariance, SPD

  int numSegments() const { return static_cast<int>(phi.size()); }
  int stateDim() const { return mean.stateDim(); }
  double dt() const { return mean.times.size() > 1 ? mean.times[1] - mean.times[0] : 0.0; }
};

/// Builds a prior whose mean is the constant-velocity straight line from the
/// start position to the goal position (velocity block = displacement over
/// total_time, acceleration block zero), with N equal segments.
TrajectoryPrior buildPrior(const GaussMarkovModel& model, const StateVector& start,
                           const StateVector& goal, int num_segments, double total_time,
                           const Eigen::MatrixXd& k0, const Eigen::MatrixXd& kn);

/// Same, with both endpoint covariances sigma^2 * I.
TrajectoryPrior buildPrior(const GaussMarkovModel& model, const StateVector& start,
                           const StateVector& goal, int num_segments, double total_time,
                           double endpoint_sigma = 1e-2);

/// Assembles the sparse precision K^-1 = B^T Q^-1 B block-wise. The endpoint
/// precisions fold into the first and last diagonal blocks; every block
/// beyond the first off-diagonal band is structurally absent.
BlockTridiagonal precision(const TrajectoryPrior& prior);

/// Dense conditioned kernel K, the exact inverse of precision(prior).
/// Accumulates the process covariance segment by segment, then conditions
/// on a fictitious goal observation with covariance kn. O(N^3); intended
/// for testing at small N.
Eigen::MatrixXd denseKernelOracle(const TrajectoryPrior& prior);

/// Prior cost 0.5 * |theta - mu|^2 in the kernel metric, evaluated through
/// the factored form (per-segment residuals plus endpoint terms) without
/// forming the dense kernel.
double priorCost(const Trajectory& traj, const TrajectoryPrior& prior);

/// GP factor residual Phi(t_{i+1}, t_i) theta_i - theta_{i+1} for segment i.
Eigen::VectorXd gpResidual(const StateVector& state_i, const StateVector& state_j,
                           const TrajectoryPrior& prior, int segment);

/// Prior mean state at an arbitrary time inside [t_0, t_N].
StateVector priorMeanAt(const TrajectoryPrior& prior, double tau);

}  // namespace gpplan
