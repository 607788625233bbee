#pragma once

#include <Eigen/Core>

#include "gpplan/interp.hpp"
#include "gpplan/robot.hpp"
#include "gpplan/sdf.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

struct ObstacleParams {
  double eps = 0.2;         // safety distance, meters
  double sigma_obs = 0.01;  // obstacle cost weight (factor-graph planners)
};

struct CostAndDerivative {
  double cost = 0.0;
  double derivative = 0.0;  // d(cost)/d(distance)
};

/// Hinge loss: eps - d below the safety distance, zero above. The
/// subgradient exactly at d = eps is -0.5.
CostAndDerivative hinge(double d, double eps);

/// C1 piecewise cost used by the gradient planner: linear in collision,
/// quadratic inside the safety margin, zero beyond it.
CostAndDerivative smoothCost(double d, double eps);

/// Per-circle hinge costs at configuration q (clearance = field value minus
/// circle radius). All components are nonnegative; the zero vector is the
/// collision-free event.
Eigen::VectorXd hState(const Eigen::VectorXd& q, const Robot& robot,
                       const SignedDistanceField2D& sdf, const ObstacleParams& params);

/// Jacobian of hState with respect to the full state [q; qdot; ...]:
/// position-block columns only, velocity and acceleration columns are zero.
Eigen::MatrixXd hJacobian(const Eigen::VectorXd& q, const Robot& robot,
                          const SignedDistanceField2D& sdf, const ObstacleParams& params,
                          int state_dim);

/// Hinge costs at the state interpolated between two support states, with
/// Jacobians chained through the interpolation coefficients.
struct InterpObstacleEval {
  Eigen::VectorXd h;
  Eigen::MatrixXd jac_i;  // d h / d state_i
  Eigen::MatrixXd jac_j;  // d h / d state_{i+1}
};
InterpObstacleEval hInterp(const StateVector& state_i, const StateVector& state_j,
                           const TrajectoryPrior& prior, double tau, const Robot& robot,
                           const SignedDistanceField2D& sdf, const ObstacleParams& params);

/// Workspace obstacle gradient for an order-3 state, mapped to configuration
/// space: per circle, position block J^T |xdot| ((I - vhat vhat^T) grad_c - c kappa),
/// velocity block J^T c vhat, acceleration block zero, summed over circles.
/// Circles with |xdot| below 1e-8 contribute nothing.
Eigen::VectorXd gpmpObstacleGradient(const StateVector& state, const Robot& robot,
                                     const SignedDistanceField2D& sdf,
                                     const ObstacleParams& params);

}  // namespace gpplan
