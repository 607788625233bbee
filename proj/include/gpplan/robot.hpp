#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gpplan {

/// Collision circle rigidly attached to an arm link at a fixed offset from
/// the link's proximal joint.
struct BodyCircle {
  int link = 0;
  double offset = 0.0;  // meters along the link
  double radius = 0.0;
};

struct PlanarArm {
  std::vector<double> link_lengths;
  Eigen::Vector2d base_position = Eigen::Vector2d::Zero();
  double base_angle = 0.0;
  std::vector<std::pair<double, double>> joint_limits;  // per joint [lo, hi], radians
  std::vector<double> velocity_limits;                  // per joint max |qdot|
  std::vector<BodyCircle> circles;
};

struct PointRobot {
  double radius = 0.0;
  std::vector<std::pair<double, double>> position_limits;  // per axis [lo, hi], meters
  std::vector<double> velocity_limits;
};

/// Planar robot model: an N-link arm with body circles, or a point robot
/// whose configuration is its workspace position. Immutable; all queries
/// are pure.
class Robot {
 public:
  explicit Robot(PlanarArm arm);
  explicit Robot(PointRobot point);

  int dof() const;
  int numCircles() const;
  double circleRadius(int index) const;
  bool isArm() const { return std::holds_alternative<PlanarArm>(model_); }
  const PlanarArm& arm() const { return std::get<PlanarArm>(model_); }
  const PointRobot& point() const { return std::get<PointRobot>(model_); }

  /// Body-circle centers for configuration q (cumulative-angle planar FK).
  std::vector<Eigen::Vector2d> fkCircles(const Eigen::VectorXd& q) const;

  /// Analytic positional Jacobian (2 x dof) of one circle center.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& q, int circle_index) const;

  /// Workspace velocity and acceleration of a circle center:
  /// xdot = J qdot, xddot = J qddot + Jdot qdot with analytic Jdot.
  std::pair<Eigen::Vector2d, Eigen::Vector2d> workspaceVelAcc(const Eigen::VectorXd& q,
                                                              const Eigen::VectorXd& qdot,
                                                              const Eigen::VectorXd& qddot,
                                                              int circle_index) const;

  /// End-effector point (arm: tip of the last link; point robot: q itself)
  /// and its positional Jacobian.
  Eigen::Vector2d endEffector(const Eigen::VectorXd& q) const;
  Eigen::MatrixXd endEffectorJacobian(const Eigen::VectorXd& q) const;

  /// Per-dof position and velocity limits (+-inf when unbounded).
  std::vector<std::pair<double, double>> positionLimits() const;
  std::vector<double> velocityLimits() const;
  bool hasFiniteLimits() const;

 private:
  std::variant<PlanarArm, PointRobot> model_;
};

Robot parseRobot(const std::string& json_text);
Robot loadRobot(const std::string& path);

}  // namespace gpplan
