#include "gpplan/gpmp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gpplan/block_tridiag.hpp"

namespace gpplan {

namespace {

// Solves K^-1 x = v blockwise, i.e. applies the dense kernel without forming it.
std::vector<Eigen::VectorXd> applyKernel(const TrajectoryPrior& prior,
                                         const std::vector<Eigen::VectorXd>& v) {
  const int s = prior.stateDim();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(v.size()) * s);
  for (std::size_t k = 0; k < v.size(); ++k) flat.segment(k * s, s) = v[k];
  const auto solved = solveBlockTridiagonal(precision(prior), flat);
  if (!solved) throw std::runtime_error("gpmp: prior precision is singular");
  std::vector<Eigen::VectorXd> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = solved->segment(k * s, s);
  return out;
}

// Obstacle gradient over all up-sampled states, weighted by the up-sampled
// time step (uniform discretization of the time integral).
std::vector<Eigen::VectorXd> upsampledGradient(const Trajectory& up, const Robot& robot,
                                               const SignedDistanceField2D& sdf,
                                               const ObstacleParams& params) {
  const double dt_up = up.times[1] - up.times[0];
  std::vector<Eigen::VectorXd> g(up.numStates());
  for (int k = 0; k < up.numStates(); ++k)
    g[k] = dt_up * gpmpObstacleGradient(up.states[k], robot, sdf, params);
  return g;
}

}  // namespace

double gpmpObjective(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                     const SignedDistanceField2D& sdf, const GpmpConfig& config) {
  const UpsampleOperator op = buildUpsample(prior, config.n_ip);
  const Trajectory up = upsample(op, traj, prior);
  const double dt_up = up.times[1] - up.times[0];
  const int d = robot.dof();

  double obstacle = 0.0;
  for (int k = 0; k < up.numStates(); ++k) {
    const Eigen::VectorXd q = up.states[k].head(d);
    const Eigen::VectorXd qdot = up.states[k].segment(d, d);
    const Eigen::VectorXd qddot = up.states[k].tail(d);
    const auto centers = robot.fkCircles(q);
    for (int j = 0; j < robot.numCircles(); ++j) {
      const double clearance = sdf.query(centers[j]) - robot.circleRadius(j);
      const double cost = smoothCost(clearance, config.obstacle_params.eps).cost;
      if (cost == 0.0) continue;
      const auto [xdot, xddot] = robot.workspaceVelAcc(q, qdot, qddot, j);
      obstacle += cost * xdot.norm() * dt_up;
    }
  }
  return obstacle + config.lambda * priorCost(traj, prior);
}

Trajectory gpmpStep(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                    const SignedDistanceField2D& sdf, const GpmpConfig& config,
                    const UpsampleOperator& op) {
  const Trajectory up = upsample(op, traj, prior);
  const auto g_up = upsampledGradient(up, robot, sdf, config.obstacle_params);

  bool has_gradient = false;
  for (const auto& g : g_up)
    if (g.squaredNorm() > 0.0) {
      has_gradient = true;
      break;
    }

  Trajectory out = traj;
  if (has_gradient) {
    const auto projected = projectGradient(op, g_up);
    const auto smoothed = applyKernel(prior, projected);
    for (int k = 0; k < traj.numStates(); ++k) {
      out.states[k] -= (config.lambda * (traj.states[k] - prior.mean.states[k]) + smoothed[k]) /
                       config.eta;
    }
  } else {
    // Pure prior pull: theta <- theta - (lambda/eta)(theta - mean).
    for (int k = 0; k < traj.numStates(); ++k)
      out.states[k] -= config.lambda / config.eta * (traj.states[k] - prior.mean.states[k]);
  }
  return out;
}

Trajectory projectJointLimits(const Trajectory& traj, const TrajectoryPrior& prior,
                              const Robot& robot, const UpsampleOperator& op) {
  const auto limits = robot.positionLimits();
  const int d = robot.dof();
  const int s = prior.stateDim();

  Trajectory out = traj;
  for (int pass = 0; pass < 10; ++pass) {
    const Trajectory up = upsample(op, out, prior);
    std::vector<Eigen::VectorXd> violation(up.numStates(), Eigen::VectorXd::Zero(s));
    bool any = false;
    for (int k = 0; k < up.numStates(); ++k) {
      for (int m = 0; m < d; ++m) {
        const double q = up.states[k][m];
        const double clamped = std::min(std::max(q, limits[m].first), limits[m].second);
        if (clamped != q) {
          violation[k][m] = clamped - q;
          any = true;
        }
      }
    }
    if (!any) break;
    const auto smoothed = applyKernel(prior, projectGradient(op, violation));
    for (int k = 0; k < out.numStates(); ++k) out.states[k] += smoothed[k];
  }

  // Clamp guarantee on the support states.
  for (auto& state : out.states)
    for (int m = 0; m < d; ++m)
      state[m] = std::min(std::max(state[m], limits[m].first), limits[m].second);
  return out;
}

bool upsampledFeasible(const Trajectory& traj, const TrajectoryPrior& prior, const Robot& robot,
                       const SignedDistanceField2D& sdf, const UpsampleOperator& op) {
  const Trajectory up = upsample(op, traj, prior);
  const int d = robot.dof();
  for (const auto& state : up.states) {
    if (!state.allFinite()) return false;
    const auto centers = robot.fkCircles(state.head(d));
    for (int j = 0; j < robot.numCircles(); ++j)
      if (sdf.query(centers[j]) - robot.circleRadius(j) <= 0.0) return false;
  }
  return true;
}

GpmpResult gpmpPlan(const TrajectoryPrior& prior, const Robot& robot,
                    const SignedDistanceField2D& sdf, const GpmpConfig& config,
                    const Trajectory& init) {
  const auto t_start = std::chrono::steady_clock::now();
  const UpsampleOperator op = buildUpsample(prior, config.n_ip);
  const bool limits = robot.hasFiniteLimits();

  auto finiteEverywhere = [&](const Trajectory& traj) {
    for (const auto& state : traj.states)
      if (!state.allFinite()) return false;
    for (const auto& state : upsample(op, traj, prior).states)
      if (!state.allFinite()) return false;
    return true;
  };

  GpmpResult result;
  result.trajectory = init;
  bool diverged = false;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    Trajectory stepped = gpmpStep(result.trajectory, prior, robot, sdf, config, op);
    if (limits && finiteEverywhere(stepped))
      stepped = projectJointLimits(stepped, prior, robot, op);
    if (!finiteEverywhere(stepped)) {
      diverged = true;  // keep the last finite iterate
      break;
    }
    result.trajectory = std::move(stepped);
    result.iterations = iter + 1;
    if (iter + 1 >= config.min_iterations_before_collision_check &&
        upsampledFeasible(result.trajectory, prior, robot, sdf, op)) {
      result.converged = true;
      break;
    }
  }
  result.feasible =
      !diverged && upsampledFeasible(result.trajectory, prior, robot, sdf, op);
  result.final_objective =
      diverged ? std::numeric_limits<double>::infinity()
               : gpmpObjective(result.trajectory, prior, robot, sdf, config);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace gpplan
