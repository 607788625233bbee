#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "gpplan/block_tridiag.hpp"
#include "gpplan/obstacle_cost.hpp"
#include "gpplan/prior.hpp"
#include "gpplan/robot.hpp"
#include "gpplan/sdf.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

enum class FactorKind {
  StartPrior,
  GoalPrior,
  GpPrior,
  Obstacle,
  InterpObstacle,
  JointLimit,
  VelocityLimit,
  Equality,
  FixedState,
};

/// One term of the factored posterior. Unary factors set `j` to -1; binary
/// factors must connect adjacent support states, which keeps the normal
/// equations block-tridiagonal.
struct Factor {
  FactorKind kind = FactorKind::Obstacle;
  int i = 0;
  int j = -1;

  Eigen::VectorXd target;    // prior/fixed target state; workspace target for Equality
  Eigen::MatrixXd cov;       // covariance for state priors (StartPrior/GoalPrior/FixedState)
  double tau = 0.0;          // interpolation time for InterpObstacle
  double sigma = 1.0;        // isotropic noise for limit/equality factors
  double eps_limit = 0.0;    // margin for limit factors

  // Derived quantities filled in by FactorGraph::add (shared coefficients
  // and whitening factors are constant over the graph's lifetime).
  Eigen::MatrixXd whitener;      // inverse lower Cholesky factor of the covariance
  Eigen::MatrixXd lambda, psi;   // interpolation coefficients for InterpObstacle

  bool unary() const { return j < 0; }
  int lowestIndex() const { return i; }
};

/// Whitened residual and Jacobian blocks of one factor at given states.
struct FactorEval {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac_i;
  Eigen::MatrixXd jac_j;  // empty for unary factors
};

struct FactorGraph {
  int num_states = 0;
  std::shared_ptr<const TrajectoryPrior> prior;
  std::shared_ptr<const Robot> robot;
  std::shared_ptr<const SignedDistanceField2D> sdf;
  ObstacleParams obstacle_params;
  std::vector<Factor> factors;

  int stateDim() const { return prior->stateDim(); }
  void add(Factor factor);  // validates index range and adjacency, caches derived data
  void prepare(Factor& factor) const;
};

struct GraphProblem {
  std::shared_ptr<const TrajectoryPrior> prior;
  std::shared_ptr<const Robot> robot;
  std::shared_ptr<const SignedDistanceField2D> sdf;
  StateVector start;
  StateVector goal;
  int n_ip = 0;
  ObstacleParams obstacle_params;

  // Optional soft-constraint factors.
  bool joint_limit_factors = false;
  bool velocity_limit_factors = false;
  double sigma_limit = 0.1;
  double eps_limit = 0.0;
  bool equality_factor = false;
  int equality_index = 0;
  Eigen::Vector2d equality_target = Eigen::Vector2d::Zero();
  double sigma_equality = 1e-3;
};

/// Start/goal priors, one GP prior per segment, an obstacle factor on every
/// support state, n_ip interpolated obstacle factors per segment, and the
/// optional limit/equality factors.
FactorGraph buildGraph(const GraphProblem& problem);

/// Whitened residual and Jacobians of one factor at the given trajectory.
FactorEval evaluateFactor(const FactorGraph& graph, const Factor& factor,
                          const Trajectory& traj);

/// Whitened residual only (skips Jacobian work).
Eigen::VectorXd factorResidual(const FactorGraph& graph, const Factor& factor,
                               const Trajectory& traj);

/// Total error 0.5 * sum |r|^2 over all factors.
double totalError(const FactorGraph& graph, const Trajectory& traj);

/// Gauss-Newton normal equations A delta = b assembled factor by factor.
/// A is structurally block-tridiagonal; each factor touches only the blocks
/// of its connected variables.
struct LinearSystem {
  BlockTridiagonal a;
  Eigen::VectorXd b;
};
LinearSystem linearize(const FactorGraph& graph, const Trajectory& traj);

}  // namespace gpplan
