#include "gpplan/obstacle_cost.hpp"

#include <cmath>
#include <stdexcept>

namespace gpplan {

CostAndDerivative hinge(double d, double eps) {
  if (std::abs(d - eps) <= 1e-12) return {0.0, -0.5};
  if (d < eps) return {eps - d, -1.0};
  return {0.0, 0.0};
}

CostAndDerivative smoothCost(double d, double eps) {
  if (d < 0.0) return {-d + 0.5 * eps, -1.0};
  if (d <= eps) {
    const double r = d - eps;
    return {r * r / (2.0 * eps), r / eps};
  }
  return {0.0, 0.0};
}

Eigen::VectorXd hState(const Eigen::VectorXd& q, const Robot& robot,
                       const SignedDistanceField2D& sdf, const ObstacleParams& params) {
  const auto centers = robot.fkCircles(q);
  Eigen::VectorXd h(centers.size());
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double clearance = sdf.query(centers[j]) - robot.circleRadius(static_cast<int>(j));
    h[static_cast<Eigen::Index>(j)] = hinge(clearance, params.eps).cost;
  }
  return h;
}

Eigen::MatrixXd hJacobian(const Eigen::VectorXd& q, const Robot& robot,
                          const SignedDistanceField2D& sdf, const ObstacleParams& params,
                          int state_dim) {
  const int d = robot.dof();
  if (state_dim < d) throw std::invalid_argument("hJacobian: state_dim smaller than dof");
  const auto centers = robot.fkCircles(q);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(centers.size()), state_dim);
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double clearance = sdf.query(centers[j]) - robot.circleRadius(static_cast<int>(j));
    const double dcdd = hinge(clearance, params.eps).derivative;
    if (dcdd == 0.0) continue;
    const Eigen::Vector2d grad = sdf.gradient(centers[j]);
    jac.row(static_cast<Eigen::Index>(j)).head(d) =
        dcdd * grad.transpose() * robot.jacobian(q, static_cast<int>(j));
  }
  return jac;
}

InterpObstacleEval hInterp(const StateVector& state_i, const StateVector& state_j,
                           const TrajectoryPrior& prior, double tau, const Robot& robot,
                           const SignedDistanceField2D& sdf, const ObstacleParams& params) {
  const auto& times = prior.mean.times;
  const double dt = prior.dt();
  int seg = static_cast<int>(std::floor((tau - times.front()) / dt));
  seg = std::max(0, std::min(seg, prior.numSegments() - 1));
  if (tau <= times[seg] || tau >= times[seg + 1])
    throw std::invalid_argument("hInterp: tau must lie strictly inside a segment");

  const InterpCoeffs c = lambdaPsi(prior.model, times[seg], times[seg + 1], tau);
  const StateVector mean_tau =
      c.lambda * prior.mean.states[seg] + c.psi * prior.mean.states[seg + 1];
  const StateVector interp = mean_tau + c.lambda * (state_i - prior.mean.states[seg]) +
                             c.psi * (state_j - prior.mean.states[seg + 1]);

  InterpObstacleEval out;
  out.h = hState(interp.head(robot.dof()), robot, sdf, params);
  const Eigen::MatrixXd jac_state =
      hJacobian(interp.head(robot.dof()), robot, sdf, params, prior.stateDim());
  out.jac_i = jac_state * c.lambda;
  out.jac_j = jac_state * c.psi;
  return out;
}

Eigen::VectorXd gpmpObstacleGradient(const StateVector& state, const Robot& robot,
                                     const SignedDistanceField2D& sdf,
                                     const ObstacleParams& params) {
  const int d = robot.dof();
  if (state.size() != 3 * d)
    throw std::invalid_argument("gpmpObstacleGradient: expected an order-3 state");
  const Eigen::VectorXd q = state.head(d);
  const Eigen::VectorXd qdot = state.segment(d, d);
  const Eigen::VectorXd qddot = state.tail(d);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(3 * d);
  const auto centers = robot.fkCircles(q);
  for (int j = 0; j < robot.numCircles(); ++j) {
    const auto [xdot, xddot] = robot.workspaceVelAcc(q, qdot, qddot, j);
    const double speed = xdot.norm();
    if (speed < 1e-8) continue;  // arc-length integrand vanishes with |xdot|

    const double clearance = sdf.query(centers[j]) - robot.circleRadius(j);
    const auto [cost, dcdd] = smoothCost(clearance, params.eps);
    const Eigen::Vector2d grad_c = dcdd * sdf.gradient(centers[j]);

    const Eigen::Vector2d vhat = xdot / speed;
    const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - vhat * vhat.transpose();
    const Eigen::Vector2d kappa = proj * xddot / (speed * speed);
    const Eigen::MatrixXd jac = robot.jacobian(q, j);

    grad.head(d) += jac.transpose() * (speed * (proj * grad_c - cost * kappa));
    grad.segment(d, d) += jac.transpose() * (cost * vhat);
  }
  return grad;
}

}  // namespace gpplan
