#include "gpplan/factor_graph.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace gpplan {

namespace {

// Inverse lower Cholesky factor, used to whiten residuals and Jacobians.
Eigen::MatrixXd whitenerOf(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("factor covariance is not positive-definite");
  const int n = static_cast<int>(cov.rows());
  return llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
}

// Double hinge with margin eps: active below lo + eps and above hi - eps.
// The kink subgradient convention matches the obstacle hinge.
void doubleHinge(double x, double lo, double hi, double eps, double& cost, double& slope) {
  const double lower = lo + eps;
  const double upper = hi - eps;
  if (std::abs(x - lower) <= 1e-12 && std::isfinite(lower)) {
    cost = 0.0;
    slope = -0.5;
  } else if (x < lower) {
    cost = lower - x;
    slope = -1.0;
  } else if (std::abs(x - upper) <= 1e-12 && std::isfinite(upper)) {
    cost = 0.0;
    slope = 0.5;
  } else if (x > upper) {
    cost = x - upper;
    slope = 1.0;
  } else {
    cost = 0.0;
    slope = 0.0;
  }
}

// Per-circle clearance costs, and optionally the Jacobian rows, sharing one
// forward-kinematics pass.
void obstacleTerm(const Eigen::VectorXd& q, const Robot& robot,
                  const SignedDistanceField2D& sdf, const ObstacleParams& params, int state_dim,
                  Eigen::VectorXd& h, Eigen::MatrixXd* jac) {
  const int d = robot.dof();
  const auto centers = robot.fkCircles(q);
  h.resize(static_cast<Eigen::Index>(centers.size()));
  if (jac) jac->setZero(static_cast<Eigen::Index>(centers.size()), state_dim);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double clearance = sdf.query(centers[k]) - robot.circleRadius(static_cast<int>(k));
    const auto [cost, dcdd] = hinge(clearance, params.eps);
    h[static_cast<Eigen::Index>(k)] = cost;
    if (jac && dcdd != 0.0) {
      const Eigen::Vector2d grad = sdf.gradient(centers[k]);
      jac->row(static_cast<Eigen::Index>(k)).head(d) =
          dcdd * grad.transpose() * robot.jacobian(q, static_cast<int>(k));
    }
  }
}

StateVector interpolatedState(const Factor& factor, const TrajectoryPrior& prior,
                              const StateVector& state_i, const StateVector& state_j) {
  const StateVector mean_tau = factor.lambda * prior.mean.states[factor.i] +
                               factor.psi * prior.mean.states[factor.j];
  return mean_tau + factor.lambda * (state_i - prior.mean.states[factor.i]) +
         factor.psi * (state_j - prior.mean.states[factor.j]);
}

void limitResidual(const FactorGraph& graph, const Factor& factor, const Trajectory& traj,
                   Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  const bool on_velocity = factor.kind == FactorKind::VelocityLimit;
  const int d = graph.robot->dof();
  const int s = graph.stateDim();
  const auto limits = graph.robot->positionLimits();
  const auto vel_limits = graph.robot->velocityLimits();
  r.setZero(d);
  if (jac) jac->setZero(d, s);
  for (int k = 0; k < d; ++k) {
    const double lo = on_velocity ? -vel_limits[k] : limits[k].first;
    const double hi = on_velocity ? vel_limits[k] : limits[k].second;
    const double x = on_velocity ? traj.states[factor.i][d + k] : traj.states[factor.i][k];
    double cost = 0.0, slope = 0.0;
    doubleHinge(x, lo, hi, factor.eps_limit, cost, slope);
    r[k] = cost / factor.sigma;
    if (jac) (*jac)(k, (on_velocity ? d : 0) + k) = slope / factor.sigma;
  }
}

}  // namespace

void FactorGraph::prepare(Factor& factor) const {
  switch (factor.kind) {
    case FactorKind::StartPrior:
    case FactorKind::GoalPrior:
    case FactorKind::FixedState:
      factor.whitener = whitenerOf(factor.cov);
      break;
    case FactorKind::GpPrior:
      factor.whitener = whitenerOf(prior->q[factor.i]);
      break;
    case FactorKind::InterpObstacle: {
      const auto& times = prior->mean.times;
      const InterpCoeffs c =
          lambdaPsi(prior->model, times[factor.i], times[factor.j], factor.tau);
      factor.lambda = c.lambda;
      factor.psi = c.psi;
      break;
    }
    default:
      break;
  }
}

void FactorGraph::add(Factor factor) {
  if (factor.i < 0 || factor.i >= num_states)
    throw std::invalid_argument("FactorGraph::add: variable index out of range");
  if (!factor.unary()) {
    if (factor.j != factor.i + 1)
      throw std::invalid_argument("FactorGraph::add: binary factors must connect adjacent states");
    if (factor.j >= num_states)
      throw std::invalid_argument("FactorGraph::add: variable index out of range");
  }
  prepare(factor);
  factors.push_back(std::move(factor));
}

FactorGraph buildGraph(const GraphProblem& problem) {
  if (!problem.prior || !problem.robot || !problem.sdf)
    throw std::invalid_argument("buildGraph: missing prior, robot, or sdf");
  const auto& prior = *problem.prior;
  const int n = prior.numSegments();
  const int s = prior.stateDim();
  if (problem.start.size() != s || problem.goal.size() != s)
    throw std::invalid_argument("buildGraph: start/goal dimension mismatch");
  if (problem.n_ip < 0) throw std::invalid_argument("buildGraph: n_ip must be >= 0");

  FactorGraph graph;
  graph.num_states = n + 1;
  graph.prior = problem.prior;
  graph.robot = problem.robot;
  graph.sdf = problem.sdf;
  graph.obstacle_params = problem.obstacle_params;

  Factor start{.kind = FactorKind::StartPrior, .i = 0};
  start.target = problem.start;
  start.cov = prior.k0;
  graph.add(std::move(start));

  Factor goal{.kind = FactorKind::GoalPrior, .i = n};
  goal.target = problem.goal;
  goal.cov = prior.kn;
  graph.add(std::move(goal));

  for (int i = 0; i < n; ++i) graph.add(Factor{.kind = FactorKind::GpPrior, .i = i, .j = i + 1});

  const double dt = prior.dt();
  for (int i = 0; i <= n; ++i) {
    graph.add(Factor{.kind = FactorKind::Obstacle, .i = i});
    if (i < n) {
      for (int k = 1; k <= problem.n_ip; ++k) {
        Factor f{.kind = FactorKind::InterpObstacle, .i = i, .j = i + 1};
        f.tau = prior.mean.times[i] + dt * k / (problem.n_ip + 1);
        graph.add(std::move(f));
      }
    }
  }

  if (problem.joint_limit_factors || problem.velocity_limit_factors) {
    for (int i = 0; i <= n; ++i) {
      if (problem.joint_limit_factors) {
        Factor f{.kind = FactorKind::JointLimit, .i = i};
        f.sigma = problem.sigma_limit;
        f.eps_limit = problem.eps_limit;
        graph.add(std::move(f));
      }
      if (problem.velocity_limit_factors) {
        Factor f{.kind = FactorKind::VelocityLimit, .i = i};
        f.sigma = problem.sigma_limit;
        f.eps_limit = problem.eps_limit;
        graph.add(std::move(f));
      }
    }
  }

  if (problem.equality_factor) {
    Factor f{.kind = FactorKind::Equality, .i = problem.equality_index};
    f.target = problem.equality_target;
    f.sigma = problem.sigma_equality;
    graph.add(std::move(f));
  }
  return graph;
}

FactorEval evaluateFactor(const FactorGraph& graph, const Factor& factor,
                          const Trajectory& traj) {
  const auto& prior = *graph.prior;
  const int s = prior.stateDim();
  const int d = graph.robot ? graph.robot->dof() : traj.dof;
  FactorEval eval;

  switch (factor.kind) {
    case FactorKind::StartPrior:
    case FactorKind::GoalPrior:
    case FactorKind::FixedState: {
      eval.r = factor.whitener * (traj.states[factor.i] - factor.target);
      eval.jac_i = factor.whitener;
      break;
    }
    case FactorKind::GpPrior: {
      eval.r = factor.whitener *
               gpResidual(traj.states[factor.i], traj.states[factor.j], prior, factor.i);
      eval.jac_i = factor.whitener * prior.phi[factor.i];
      eval.jac_j = -factor.whitener;
      break;
    }
    case FactorKind::Obstacle: {
      Eigen::MatrixXd jac;
      obstacleTerm(traj.states[factor.i].head(d), *graph.robot, *graph.sdf,
                   graph.obstacle_params, s, eval.r, &jac);
      const double inv_sigma = 1.0 / graph.obstacle_params.sigma_obs;
      eval.r *= inv_sigma;
      eval.jac_i = inv_sigma * jac;
      break;
    }
    case FactorKind::InterpObstacle: {
      const StateVector interp =
          interpolatedState(factor, prior, traj.states[factor.i], traj.states[factor.j]);
      Eigen::MatrixXd jac;
      obstacleTerm(interp.head(d), *graph.robot, *graph.sdf, graph.obstacle_params, s, eval.r,
                   &jac);
      const double inv_sigma = 1.0 / graph.obstacle_params.sigma_obs;
      eval.r *= inv_sigma;
      eval.jac_i = inv_sigma * (jac * factor.lambda);
      eval.jac_j = inv_sigma * (jac * factor.psi);
      break;
    }
    case FactorKind::JointLimit:
    case FactorKind::VelocityLimit: {
      limitResidual(graph, factor, traj, eval.r, &eval.jac_i);
      break;
    }
    case FactorKind::Equality: {
      const Eigen::VectorXd q = traj.states[factor.i].head(d);
      eval.r = (graph.robot->endEffector(q) - Eigen::Vector2d(factor.target)) / factor.sigma;
      eval.jac_i = Eigen::MatrixXd::Zero(2, s);
      eval.jac_i.leftCols(d) = graph.robot->endEffectorJacobian(q) / factor.sigma;
      break;
    }
  }
  return eval;
}

Eigen::VectorXd factorResidual(const FactorGraph& graph, const Factor& factor,
                               const Trajectory& traj) {
  const auto& prior = *graph.prior;
  const int d = graph.robot ? graph.robot->dof() : traj.dof;

  switch (factor.kind) {
    case FactorKind::StartPrior:
    case FactorKind::GoalPrior:
    case FactorKind::FixedState:
      return factor.whitener * (traj.states[factor.i] - factor.target);
    case FactorKind::GpPrior:
      return factor.whitener *
             gpResidual(traj.states[factor.i], traj.states[factor.j], prior, factor.i);
    case FactorKind::Obstacle: {
      Eigen::VectorXd h;
      obstacleTerm(traj.states[factor.i].head(d), *graph.robot, *graph.sdf,
                   graph.obstacle_params, 0, h, nullptr);
      return h / graph.obstacle_params.sigma_obs;
    }
    case FactorKind::InterpObstacle: {
      const StateVector interp =
          interpolatedState(factor, prior, traj.states[factor.i], traj.states[factor.j]);
      Eigen::VectorXd h;
      obstacleTerm(interp.head(d), *graph.robot, *graph.sdf, graph.obstacle_params, 0, h,
                   nullptr);
      return h / graph.obstacle_params.sigma_obs;
    }
    case FactorKind::JointLimit:
    case FactorKind::VelocityLimit: {
      Eigen::VectorXd r;
      limitResidual(graph, factor, traj, r, nullptr);
      return r;
    }
    case FactorKind::Equality: {
      const Eigen::VectorXd q = traj.states[factor.i].head(d);
      return (graph.robot->endEffector(q) - Eigen::Vector2d(factor.target)) / factor.sigma;
    }
  }
  return {};
}

double totalError(const FactorGraph& graph, const Trajectory& traj) {
  double err = 0.0;
  for (const auto& factor : graph.factors) err += 0.5 * factorResidual(graph, factor, traj).squaredNorm();
  return err;
}

LinearSystem linearize(const FactorGraph& graph, const Trajectory& traj) {
  const int s = graph.stateDim();
  const int n = graph.num_states;
  if (traj.numStates() != n || traj.stateDim() != s)
    throw std::invalid_argument("linearize: trajectory does not match graph");

  LinearSystem sys;
  sys.a = BlockTridiagonal::zero(n, s);
  sys.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * s);

  for (const auto& factor : graph.factors) {
    const FactorEval eval = evaluateFactor(graph, factor, traj);
    const int i = factor.i;
    sys.a.diag[i] += eval.jac_i.transpose() * eval.jac_i;
    sys.b.segment(i * s, s) -= eval.jac_i.transpose() * eval.r;
    if (!factor.unary()) {
      sys.a.diag[factor.j] += eval.jac_j.transpose() * eval.jac_j;
      sys.a.sub_diag[i] += eval.jac_j.transpose() * eval.jac_i;
      sys.b.segment(factor.j * s, s) -= eval.jac_j.transpose() * eval.r;
    }
  }
  return sys;
}

}  // namespace gpplan
