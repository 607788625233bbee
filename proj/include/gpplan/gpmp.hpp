#pragma once

#include <vector>

#include "gpplan/interp.hpp"
#include "gpplan/obstacle_cost.hpp"
#include "gpplan/prior.hpp"
#include "gpplan/robot.hpp"
#include "gpplan/sdf.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

struct GpmpConfig {
  double lambda = 0.005;  // trade-off between obstacle and prior functionals
  double eta = 1.0;       // update regularization
  int max_iterations = 200;
  int min_iterations_before_collision_check = 10;
  int n_ip = 5;
  ObstacleParams obstacle_params;
};

struct GpmpResult {
  Trajectory trajectory;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  double final_objective = 0.0;
  double wall_time_seconds = 0.0;
};

/// Penalized objective F_obs(theta_up) + lambda * F_gp(theta): the obstacle
/// term sums smooth workspace cost times speed times dt over circles and
/// up-sampled states.
double gpmpObjective(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                     const SignedDistanceField2D& sdf, const GpmpConfig& config);

/// One covariant gradient step
///   theta <- theta - (1/eta) (lambda (theta - mean) + K M^T g_up),
/// where K v is computed by solving the block-tridiagonal system K^-1 x = v.
Trajectory gpmpStep(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                    const SignedDistanceField2D& sdf, const GpmpConfig& config,
                    const UpsampleOperator& op);

/// Smoothly projects joint-limit violations on the up-sampled trajectory
/// back through K M^T, repeating up to 10 passes, then clamps support-state
/// positions to the limits.
Trajectory projectJointLimits(const Trajectory& traj, const TrajectoryPrior& prior,
                              const Robot& robot, const UpsampleOperator& op);

/// Full gradient-based planner: iterates gpmpStep, applies the joint-limit
/// projection when the robot has finite limits, and from iteration 10 on
/// stops as soon as the up-sampled trajectory is collision-free.
GpmpResult gpmpPlan(const TrajectoryPrior& prior, const Robot& robot,
                    const SignedDistanceField2D& sdf, const GpmpConfig& config,
                    const Trajectory& init);

/// True when every up-sampled state keeps all body circles at positive
/// clearance.
bool upsampledFeasible(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                       const SignedDistanceField2D& sdf, const UpsampleOperator& op);

}  // namespace gpplan
