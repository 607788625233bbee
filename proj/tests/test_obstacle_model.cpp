#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpplan/obstacle_cost.hpp"
#include "test_helpers.hpp"

using namespace gpplan;
namespace tt = gpplan::testing;

namespace {

Scene2D wallScene() {
  Scene2D scene;
  scene.bounds_min = {-2.0, -2.0};
  scene.bounds_max = {2.0, 2.0};
  scene.cell_size = 0.02;
  scene.obstacles.push_back(BoxObstacle{{1.5, 0.0}, {0.3, 2.0}});
  return scene;
}

Robot pointRobot(double radius) {
  PointRobot p;
  p.radius = radius;
  return Robot(std::move(p));
}

Robot twoLinkArm() {
  PlanarArm arm;
  arm.link_lengths = {0.8, 0.8};
  arm.circles = {{0, 0.4, 0.08}, {0, 0.8, 0.08}, {1, 0.4, 0.08}, {1, 0.8, 0.08}};
  return Robot(std::move(arm));
}

// Far from the safety margin in every direction, used to avoid hinge kinks
// in finite-difference checks.
bool nearKink(const Robot& robot, const SignedDistanceField2D& sdf, const Eigen::VectorXd& q,
              double eps, double margin = 2e-3) {
  const auto centers = robot.fkCircles(q);
  for (int j = 0; j < robot.numCircles(); ++j) {
    const double d = sdf.query(centers[j]) - robot.circleRadius(j);
    if (std::abs(d - eps) < margin) return true;
  }
  return false;
}

// The field must be linear across the grid-step probe window for an FD
// comparison to be well-posed: the analytic Jacobian samples the field
// gradient at the grid step, while a tiny-step FD sees the local bilinear
// slope. Creases and curvature make the two legitimately differ.
bool fieldLocallyLinearAt(const SignedDistanceField2D& sdf, const Eigen::Vector2d& p) {
  const double h = sdf.cellSize();
  const Eigen::Vector2d probes[] = {{h, 0.0}, {0.0, h}, {h, h}, {h, -h}};
  for (const auto& e : probes) {
    const double second = sdf.query(p + e) - 2.0 * sdf.query(p) + sdf.query(p - e);
    if (std::abs(second) > 1e-9 * h) return false;
  }
  return true;
}

bool fieldLocallyLinear(const Robot& robot, const SignedDistanceField2D& sdf,
                        const Eigen::VectorXd& q) {
  for (const auto& center : robot.fkCircles(q))
    if (!fieldLocallyLinearAt(sdf, center)) return false;
  return true;
}

}  // namespace

TEST_CASE("hinge values and subgradient convention") {
  auto [c1, d1] = hinge(0.1, 0.2);
  CHECK(c1 == doctest::Approx(0.1));
  CHECK(d1 == -1.0);

  auto [c2, d2] = hinge(0.25, 0.2);
  CHECK(c2 == 0.0);
  CHECK(d2 == 0.0);

  auto [c3, d3] = hinge(-0.1, 0.2);
  CHECK(c3 == doctest::Approx(0.3));
  CHECK(d3 == -1.0);

  auto [c4, d4] = hinge(0.2, 0.2);
  CHECK(c4 == 0.0);
  CHECK(d4 == -0.5);
  CHECK(hinge(0.2 + 5e-13, 0.2).derivative == -0.5);
}

TEST_CASE("smooth cost is C1 at both junctions") {
  const double eps = 0.2;
  auto [c_eps, d_eps] = smoothCost(eps, eps);
  CHECK(c_eps == 0.0);
  CHECK(d_eps == 0.0);

  auto [c0, d0] = smoothCost(0.0, eps);
  CHECK(c0 == doctest::Approx(eps / 2.0));
  CHECK(d0 == doctest::Approx(-1.0));

  auto [c_mid, d_mid] = smoothCost(eps / 2.0, eps);
  CHECK(c_mid == doctest::Approx(0.025));
  CHECK(d_mid == doctest::Approx(-0.5));

  // Continuity across d = 0 from the linear side.
  auto [c_neg, d_neg] = smoothCost(-1e-9, eps);
  CHECK(c_neg == doctest::Approx(eps / 2.0).epsilon(1e-6));
  CHECK(d_neg == -1.0);
}

TEST_CASE("hState places the hinge on circle clearance") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const Robot robot = pointRobot(0.1);
  const ObstacleParams params{0.2, 0.01};

  // Far from the wall: clearance beyond eps everywhere.
  Eigen::Vector2d q(-1.5, 0.0);
  CHECK(hState(q, robot, sdf, params).maxCoeff() == 0.0);

  // Distance to the wall face at x = 1.2 from x = 1.05 is 0.15 up to grid
  // effects; component = eps - (d - radius).
  q << 1.05, 0.0;
  const double d = sdf.query(q) - 0.1;
  const Eigen::VectorXd h = hState(q, robot, sdf, params);
  CHECK(h.size() == 1);
  CHECK(h[0] == doctest::Approx(0.2 - d));
  CHECK(h[0] > 0.0);
}

TEST_CASE("hState components are nonnegative") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const Robot robot = twoLinkArm();
  const ObstacleParams params{0.2, 0.01};
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd q = tt::randomVector(2, M_PI);
    CHECK(hState(q, robot, sdf, params).minCoeff() >= 0.0);
  }
}

TEST_CASE("hJacobian: zero rows when clear, zero velocity columns, FD agreement") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const Robot robot = twoLinkArm();
  const ObstacleParams params{0.2, 0.01};
  const int state_dim = 4;

  Eigen::VectorXd clear_q(2);
  clear_q << M_PI, 0.0;  // folded away from the wall
  CHECK(tt::maxAbs(hJacobian(clear_q, robot, sdf, params, state_dim)) == 0.0);

  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 50; ++trial) {
    const Eigen::VectorXd q = tt::randomVector(2, M_PI / 2.0);
    if (nearKink(robot, sdf, q, params.eps) || !fieldLocallyLinear(robot, sdf, q)) continue;
    const Eigen::MatrixXd jac = hJacobian(q, robot, sdf, params, state_dim);
    CHECK(tt::maxAbs(jac.rightCols(2)) == 0.0);  // velocity block

    const double h = 1e-6;
    Eigen::MatrixXd fd(robot.numCircles(), 2);
    for (int m = 0; m < 2; ++m) {
      Eigen::VectorXd qp = q, qm = q;
      qp[m] += h;
      qm[m] -= h;
      fd.col(m) = (hState(qp, robot, sdf, params) - hState(qm, robot, sdf, params)) / (2.0 * h);
    }
    CHECK(tt::maxAbs(jac.leftCols(2) - fd) < 1e-4 * std::max(1.0, tt::maxAbs(fd)));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("hInterp chains through the interpolation coefficients") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const Robot robot = pointRobot(0.1);
  const ObstacleParams params{0.2, 0.01};

  GaussMarkovModel model{ModelKind::ConstantVelocity, 2, 1.0};
  Eigen::VectorXd start(4), goal(4);
  start << -1.0, 0.0, 0.0, 0.0;
  goal << 1.1, 0.0, 0.0, 0.0;
  const TrajectoryPrior prior = buildPrior(model, start, goal, 4, 4.0);

  // Both states far from obstacles, segment far away: zero vector.
  {
    Eigen::VectorXd a(4), b(4);
    a << -1.5, -1.0, 0.1, 0.0;
    b << -1.4, -0.9, 0.1, 0.0;
    const auto eval = hInterp(a, b, prior, 0.5, robot, sdf, params);
    CHECK(eval.h.maxCoeff() == 0.0);
    CHECK(tt::maxAbs(eval.jac_i) == 0.0);
  }

  // Chain-rule identity: jac_i == hJacobian(interp) * lambda, exactly.
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd a = tt::randomVector(4, 1.2);
    const Eigen::VectorXd b = tt::randomVector(4, 1.2);
    const double tau = tt::uniform(0.1, 0.9);
    const auto eval = hInterp(a, b, prior, tau, robot, sdf, params);

    const InterpCoeffs c = lambdaPsi(model, 0.0, 1.0, tau);
    const StateVector mean_tau =
        c.lambda * prior.mean.states[0] + c.psi * prior.mean.states[1];
    const StateVector interp = mean_tau + c.lambda * (a - prior.mean.states[0]) +
                               c.psi * (b - prior.mean.states[1]);
    const Eigen::MatrixXd jac_state = hJacobian(interp.head(2), robot, sdf, params, 4);
    CHECK(tt::maxAbs(eval.jac_i - jac_state * c.lambda) < 1e-12);
    CHECK(tt::maxAbs(eval.jac_j - jac_state * c.psi) < 1e-12);
  }

  CHECK_THROWS_AS(hInterp(start, goal, prior, 0.0, robot, sdf, params), std::invalid_argument);

  // Limit tau -> t_i: the value approaches hState(state_i) and the Jacobian
  // with respect to the right state vanishes.
  {
    Eigen::VectorXd a(4), b(4);
    a << 0.95, 0.1, 0.0, 0.0;  // inside the safety margin near the wall
    b << 0.5, -0.3, 0.0, 0.0;
    const double tau = 1e-6;
    const auto eval = hInterp(a, b, prior, tau, robot, sdf, params);
    const Eigen::VectorXd at_i = hState(a.head(2), robot, sdf, params);
    CHECK((eval.h - at_i).norm() < 1e-4);
    CHECK(tt::maxAbs(eval.jac_j) < 1e-4);
  }
}

TEST_CASE("hInterp finite differences on both state arguments") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const Robot robot = pointRobot(0.1);
  const ObstacleParams params{0.2, 0.01};
  GaussMarkovModel model{ModelKind::ConstantVelocity, 2, 1.0};
  Eigen::VectorXd start(4), goal(4);
  start << -1.0, 0.0, 0.0, 0.0;
  goal << 1.1, 0.0, 0.0, 0.0;
  const TrajectoryPrior prior = buildPrior(model, start, goal, 4, 4.0);

  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 30; ++trial) {
    Eigen::VectorXd a = tt::randomVector(4, 1.2);
    Eigen::VectorXd b = tt::randomVector(4, 1.2);
    const double tau = tt::uniform(0.15, 0.85);
    const InterpCoeffs c = lambdaPsi(model, 0.0, 1.0, tau);
    const StateVector mean_tau =
        c.lambda * prior.mean.states[0] + c.psi * prior.mean.states[1];
    const StateVector interp = mean_tau + c.lambda * (a - prior.mean.states[0]) +
                               c.psi * (b - prior.mean.states[1]);
    if (nearKink(robot, sdf, interp.head(2), params.eps, 5e-3) ||
        !fieldLocallyLinear(robot, sdf, interp.head(2)))
      continue;
    const auto eval = hInterp(a, b, prior, tau, robot, sdf, params);

    const double h = 1e-6;
    for (int m = 0; m < 4; ++m) {
      Eigen::VectorXd ap = a, am = a;
      ap[m] += h;
      am[m] -= h;
      const Eigen::VectorXd fd = (hInterp(ap, b, prior, tau, robot, sdf, params).h -
                                  hInterp(am, b, prior, tau, robot, sdf, params).h) /
                                 (2.0 * h);
      CHECK((eval.jac_i.col(m) - fd).norm() < 1e-4 * std::max(1.0, fd.norm()));
    }
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("gpmp gradient: zero when clear, zero at rest, straight-line reduction") {
  const SignedDistanceField2D sdf = sceneSdf(wallScene());
  const ObstacleParams params{0.2, 0.01};

  PointRobot p;
  p.radius = 0.1;
  const Robot robot{std::move(p)};

  // All circles clear: zero gradient.
  Eigen::VectorXd clear_state(6);
  clear_state << -1.5, 0.0, 0.3, 0.1, 0.0, 0.0;
  CHECK(gpmpObstacleGradient(clear_state, robot, sdf, params).norm() == 0.0);

  // Stationary circle contributes nothing even in the margin.
  Eigen::VectorXd still(6);
  still << 1.05, 0.0, 0.0, 0.0, 1.0, 1.0;
  CHECK(gpmpObstacleGradient(still, robot, sdf, params).norm() == 0.0);

  // Straight-line constant-speed motion toward the wall: kappa = 0 and the
  // position block reduces to J^T |xdot| (I - vhat vhat^T) grad_c.
  Eigen::VectorXd state(6);
  state << 1.0, 0.0, 0.8, 0.0, 0.0, 0.0;
  const Eigen::VectorXd grad = gpmpObstacleGradient(state, robot, sdf, params);

  const Eigen::Vector2d x(1.0, 0.0);
  const double clearance = sdf.query(x) - 0.1;
  const auto [cost, dcdd] = smoothCost(clearance, params.eps);
  const Eigen::Vector2d grad_c = dcdd * sdf.gradient(x);
  const Eigen::Vector2d vhat(1.0, 0.0);
  const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - vhat * vhat.transpose();
  const Eigen::Vector2d expected_pos = 0.8 * (proj * grad_c);
  CHECK((grad.head(2) - expected_pos).norm() < 1e-12);
  CHECK((grad.segment(2, 2) - cost * vhat).norm() < 1e-12);
  CHECK(grad.tail(2).norm() == 0.0);
}

TEST_CASE("gpmp gradient is invariant to translating scene and robot together") {
  const Eigen::Vector2d offset(0.4, -0.3);
  Scene2D scene = wallScene();
  Scene2D moved = scene;
  std::get<BoxObstacle>(moved.obstacles[0]).center += offset;
  moved.bounds_min += offset;
  moved.bounds_max += offset;

  PlanarArm arm;
  arm.link_lengths = {0.8, 0.8};
  arm.circles = {{0, 0.8, 0.08}, {1, 0.8, 0.08}};
  PlanarArm arm_moved = arm;
  arm_moved.base_position += offset;

  const SignedDistanceField2D sdf_a = sceneSdf(scene);
  const SignedDistanceField2D sdf_b = sceneSdf(moved);
  const Robot robot_a{std::move(arm)};
  const Robot robot_b{std::move(arm_moved)};
  const ObstacleParams params{0.2, 0.01};

  Eigen::VectorXd state(6);
  state << 0.3, -0.4, 0.5, 0.2, 0.1, -0.1;
  const Eigen::VectorXd ga = gpmpObstacleGradient(state, robot_a, sdf_a, params);
  const Eigen::VectorXd gb = gpmpObstacleGradient(state, robot_b, sdf_b, params);
  CHECK((ga - gb).norm() < 1e-9 * std::max(1.0, ga.norm()));
}
