#pragma once

#include <Eigen/Core>
#include <vector>

namespace gpplan {

/// A state vector stacks [position; velocity] (order 2) or
/// [position; velocity; acceleration] (order 3), each block of size dof.
using StateVector = Eigen::VectorXd;

/// Trajectory parameterized by support states at equidistant times.
struct Trajectory {
  std::vector<StateVector> states;
  std::vector<double> times;
  int dof = 0;    // configuration dimension D
  int order = 0;  // blocks per state (2 or 3)

  int numStates() const { return static_cast<int>(states.size()); }
  int stateDim() const { return dof * order; }
  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }

  Eigen::Ref<const Eigen::VectorXd> position(int i) const {
    return states[i].head(dof);
  }
  Eigen::Ref<const Eigen::VectorXd> velocity(int i) const {
    return states[i].segment(dof, dof);
  }

  /// Stacks all states into one flat vector (block i at offset i * stateDim).
  Eigen::VectorXd flatten() const;
  /// Inverse of flatten(); keeps times/dof/order and replaces state values.
  void unflatten(const Eigen::VectorXd& flat);
};

/// Checks the shared-dimension and equidistant-times invariants.
/// Throws std::invalid_argument on violation.
void validateTrajectory(const Trajectory& traj);

}  // namespace gpplan
