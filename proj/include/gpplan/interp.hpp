#pragma once

#include <Eigen/Core>
#include <vector>

#include "gpplan/prior.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

/// Coefficients expressing the posterior state at time tau inside segment
/// `segment` as a linear combination of the two adjacent support states:
/// theta(tau) = mean(tau) + lambda (theta_i - mean_i) + psi (theta_{i+1} - mean_{i+1}).
struct InterpCoeffs {
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd psi;
  int segment = 0;
  double tau = 0.0;
};

/// Closed-form interpolation coefficients for t_i <= tau <= t_ip1.
/// psi = Q_{i,tau} Phi(t_ip1, tau)^T Q_{i,ip1}^-1, lambda = Phi(tau, t_i) - psi Phi(t_ip1, t_i).
InterpCoeffs lambdaPsi(const GaussMarkovModel& model, double t_i, double t_ip1, double tau);

/// O(1) posterior mean interpolation between the two support states adjacent
/// to tau. Returns the stored state exactly when tau hits a support time.
StateVector interpolateState(const Trajectory& traj, const TrajectoryPrior& prior, double tau);

/// Sparse up-sampling operator: maps N+1 support states to
/// (N+1) + N * n_ip states at equidistant times. Each interpolated row
/// couples exactly the two adjacent support states; rows at support times
/// are identity. Segments share one coefficient table since dt is uniform.
struct UpsampleOperator {
  int n_ip = 0;
  int num_segments = 0;
  int state_dim = 0;
  std::vector<InterpCoeffs> coeffs;  // n_ip entries, tau offsets within one segment
  std::vector<double> times;         // all output times

  int numOutputStates() const { return num_segments * (n_ip + 1) + 1; }
};

UpsampleOperator buildUpsample(const TrajectoryPrior& prior, int n_ip);

/// Dense trajectory theta_up = M (theta - mean) + mean_up. Rows at support
/// times equal the support states exactly.
Trajectory upsample(const UpsampleOperator& op, const Trajectory& traj,
                    const TrajectoryPrior& prior);

/// Adjoint map M^T applied to a dense gradient: accumulates each up-sampled
/// block back onto the support states it depends on.
std::vector<Eigen::VectorXd> projectGradient(const UpsampleOperator& op,
                                             const std::vector<Eigen::VectorXd>& g_up);

}  // namespace gpplan
