#include "gpplan/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace gpplan {

Eigen::VectorXd Trajectory::flatten() const {
  const int s = stateDim();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(s) * numStates());
  for (int i = 0; i < numStates(); ++i) flat.segment(i * s, s) = states[i];
  return flat;
}

void Trajectory::unflatten(const Eigen::VectorXd& flat) {
  const int s = stateDim();
  if (flat.size() != static_cast<Eigen::Index>(s) * numStates())
    throw std::invalid_argument("Trajectory::unflatten: size mismatch");
  for (int i = 0; i < numStates(); ++i) states[i] = flat.segment(i * s, s);
}

void validateTrajectory(const Trajectory& traj) {
  if (traj.dof < 1 || (traj.order != 2 && traj.order != 3))
    throw std::invalid_argument("trajectory: dof must be >= 1 and order 2 or 3");
  if (traj.states.size() != traj.times.size() || traj.states.size() < 2)
    throw std::invalid_argument("trajectory: need at least two states with matching times");
  const int s = traj.stateDim();
  for (const auto& x : traj.states)
    if (x.size() != s) throw std::invalid_argument("trajectory: state dimension mismatch");
  const double dt0 = traj.times[1] - traj.times[0];
  if (dt0 <= 0.0) throw std::invalid_argument("trajectory: times must be strictly increasing");
  for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    if (std::abs(dt - dt0) > 1e-12 * std::max(1.0, std::abs(dt0)))
      throw std::invalid_argument("trajectory: times must be equidistant");
  }
}

}  // namespace gpplan
