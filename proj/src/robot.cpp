#include "gpplan/robot.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gpplan {

namespace {

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

void validateArm(const PlanarArm& arm) {
  const std::size_t d = arm.link_lengths.size();
  if (d == 0) throw std::invalid_argument("robot: arm needs at least one link");
  for (double len : arm.link_lengths)
    if (len <= 0.0) throw std::invalid_argument("robot: link lengths must be > 0");
  if (!arm.joint_limits.empty() && arm.joint_limits.size() != d)
    throw std::invalid_argument("robot: joint_limits size mismatch");
  for (const auto& [lo, hi] : arm.joint_limits)
    if (lo >= hi) throw std::invalid_argument("robot: joint limit min must be < max");
  if (!arm.velocity_limits.empty() && arm.velocity_limits.size() != d)
    throw std::invalid_argument("robot: velocity_limits size mismatch");
  if (arm.circles.empty()) throw std::invalid_argument("robot: arm needs body circles");
  std::vector<bool> covered(d, false);
  for (const auto& c : arm.circles) {
    if (c.link < 0 || c.link >= static_cast<int>(d))
      throw std::invalid_argument("robot: circle link index out of range");
    if (c.offset < 0.0 || c.offset > arm.link_lengths[c.link])
      throw std::invalid_argument("robot: circle offset outside its link");
    if (c.radius <= 0.0) throw std::invalid_argument("robot: circle radius must be > 0");
    covered[c.link] = true;
  }
  for (bool ok : covered)
    if (!ok) throw std::invalid_argument("robot: every link needs at least one circle");
}

}  // namespace

Robot::Robot(PlanarArm arm) : model_(std::move(arm)) { validateArm(this->arm()); }

Robot::Robot(PointRobot point) : model_(std::move(point)) {
  if (this->point().radius < 0.0) throw std::invalid_argument("robot: radius must be >= 0");
}

int Robot::dof() const { return isArm() ? static_cast<int>(arm().link_lengths.size()) : 2; }

int Robot::numCircles() const {
  return isArm() ? static_cast<int>(arm().circles.size()) : 1;
}

double Robot::circleRadius(int index) const {
  return isArm() ? arm().circles[index].radius : point().radius;
}

std::vector<Eigen::Vector2d> Robot::fkCircles(const Eigen::VectorXd& q) const {
  if (q.size() != dof()) throw std::invalid_argument("fkCircles: configuration size mismatch");
  if (!isArm()) return {Eigen::Vector2d(q.x(), q.y())};

  const auto& a = arm();
  const int d = dof();
  // Joint positions and cumulative angles.
  std::vector<Eigen::Vector2d> joints(d + 1);
  std::vector<double> angle(d);
  joints[0] = a.base_position;
  double acc = a.base_angle;
  for (int k = 0; k < d; ++k) {
    acc += q[k];
    angle[k] = acc;
    joints[k + 1] = joints[k] + a.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
  }
  std::vector<Eigen::Vector2d> centers;
  centers.reserve(a.circles.size());
  for (const auto& c : a.circles)
    centers.push_back(joints[c.link] +
                      c.offset * Eigen::Vector2d(std::cos(angle[c.link]), std::sin(angle[c.link])));
  return centers;
}

Eigen::MatrixXd Robot::jacobian(const Eigen::VectorXd& q, int circle_index) const {
  if (circle_index < 0 || circle_index >= numCircles())
    throw std::invalid_argument("jacobian: circle index out of range");
  const int d = dof();
  if (!isArm()) return Eigen::MatrixXd::Identity(2, 2);

  const auto& a = arm();
  std::vector<Eigen::Vector2d> joints(d + 1);
  joints[0] = a.base_position;
  double acc = a.base_angle;
  std::vector<double> angle(d);
  for (int k = 0; k < d; ++k) {
    acc += q[k];
    angle[k] = acc;
    joints[k + 1] = joints[k] + a.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
  }
  const auto& c = a.circles[circle_index];
  const Eigen::Vector2d center =
      joints[c.link] + c.offset * Eigen::Vector2d(std::cos(angle[c.link]), std::sin(angle[c.link]));

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, d);
  // Revolute column: 90-degree rotation of the lever from joint m to the point.
  for (int m = 0; m <= c.link; ++m) jac.col(m) = perp(center - joints[m]);
  return jac;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> Robot::workspaceVelAcc(
    const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, const Eigen::VectorXd& qddot,
    int circle_index) const {
  if (!isArm()) return {Eigen::Vector2d(qdot.x(), qdot.y()), Eigen::Vector2d(qddot.x(), qddot.y())};

  const auto& a = arm();
  const int d = dof();
  std::vector<Eigen::Vector2d> joints(d + 1);
  joints[0] = a.base_position;
  double acc = a.base_angle;
  std::vector<double> angle(d);
  for (int k = 0; k < d; ++k) {
    acc += q[k];
    angle[k] = acc;
    joints[k + 1] = joints[k] + a.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
  }
  const auto& c = a.circles[circle_index];
  const Eigen::Vector2d center =
      joints[c.link] + c.offset * Eigen::Vector2d(std::cos(angle[c.link]), std::sin(angle[c.link]));

  // Velocities of the joints and the circle center.
  std::vector<Eigen::Vector2d> joint_vel(d + 1, Eigen::Vector2d::Zero());
  double omega = 0.0;
  for (int k = 0; k < d; ++k) {
    omega += qdot[k];
    joint_vel[k + 1] =
        joint_vel[k] + omega * perp(joints[k + 1] - joints[k]);
  }
  double omega_c = 0.0;
  for (int m = 0; m <= c.link; ++m) omega_c += qdot[m];
  const Eigen::Vector2d center_vel = joint_vel[c.link] + omega_c * perp(center - joints[c.link]);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, d);
  Eigen::MatrixXd jac_dot = Eigen::MatrixXd::Zero(2, d);
  for (int m = 0; m <= c.link; ++m) {
    jac.col(m) = perp(center - joints[m]);
    jac_dot.col(m) = perp(center_vel - joint_vel[m]);
  }
  const Eigen::Vector2d xdot = jac * qdot;
  const Eigen::Vector2d xddot = jac * qddot + jac_dot * qdot;
  return {xdot, xddot};
}

Eigen::Vector2d Robot::endEffector(const Eigen::VectorXd& q) const {
  if (!isArm()) return {q.x(), q.y()};
  const auto& a = arm();
  Eigen::Vector2d p = a.base_position;
  double acc = a.base_angle;
  for (int k = 0; k < dof(); ++k) {
    acc += q[k];
    p += a.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
  }
  return p;
}

Eigen::MatrixXd Robot::endEffectorJacobian(const Eigen::VectorXd& q) const {
  const int d = dof();
  if (!isArm()) return Eigen::MatrixXd::Identity(2, 2);
  const auto& a = arm();
  std::vector<Eigen::Vector2d> joints(d + 1);
  joints[0] = a.base_position;
  double acc = a.base_angle;
  for (int k = 0; k < d; ++k) {
    acc += q[k];
    joints[k + 1] = joints[k] + a.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
  }
  Eigen::MatrixXd jac(2, d);
  for (int m = 0; m < d; ++m) jac.col(m) = perp(joints[d] - joints[m]);
  return jac;
}

std::vector<std::pair<double, double>> Robot::positionLimits() const {
  const double inf = std::numeric_limits<double>::infinity();
  if (isArm()) {
    if (!arm().joint_limits.empty()) return arm().joint_limits;
    return std::vector<std::pair<double, double>>(dof(), {-inf, inf});
  }
  if (!point().position_limits.empty()) return point().position_limits;
  return std::vector<std::pair<double, double>>(2, {-inf, inf});
}

std::vector<double> Robot::velocityLimits() const {
  const double inf = std::numeric_limits<double>::infinity();
  const auto& lim = isArm() ? arm().velocity_limits : point().velocity_limits;
  if (!lim.empty()) return lim;
  return std::vector<double>(dof(), inf);
}

bool Robot::hasFiniteLimits() const {
  for (const auto& [lo, hi] : positionLimits())
    if (std::isfinite(lo) || std::isfinite(hi)) return true;
  return false;
}

namespace {

using nlohmann::json;

std::vector<std::pair<double, double>> parseLimitPairs(const json& j) {
  std::vector<std::pair<double, double>> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("robot: limit entries must be [lo, hi]");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

}  // namespace

Robot parseRobot(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("robot: invalid JSON: ") + e.what());
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "planar_arm") {
    PlanarArm arm;
    arm.link_lengths = j.at("link_lengths").get<std::vector<double>>();
    if (j.contains("base")) {
      const auto& b = j["base"];
      if (!b.is_array() || b.size() != 3)
        throw std::invalid_argument("robot: base must be [x, y, angle]");
      arm.base_position = {b[0].get<double>(), b[1].get<double>()};
      arm.base_angle = b[2].get<double>();
    }
    if (j.contains("joint_limits")) arm.joint_limits = parseLimitPairs(j["joint_limits"]);
    if (j.contains("velocity_limits"))
      arm.velocity_limits = j["velocity_limits"].get<std::vector<double>>();
    for (const auto& jc : j.at("circles")) {
      BodyCircle c;
      c.link = jc.at("link").get<int>();
      c.offset = jc.at("offset").get<double>();
      c.radius = jc.at("radius").get<double>();
      arm.circles.push_back(c);
    }
    return Robot(std::move(arm));
  }
  if (type == "point_robot") {
    PointRobot p;
    p.radius = j.at("radius").get<double>();
    if (j.contains("position_limits")) p.position_limits = parseLimitPairs(j["position_limits"]);
    if (j.contains("velocity_limits"))
      p.velocity_limits = j["velocity_limits"].get<std::vector<double>>();
    return Robot(std::move(p));
  }
  throw std::invalid_argument("robot: unknown type '" + type + "'");
}

Robot loadRobot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("robot: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseRobot(buf.str());
}

}  // namespace gpplan
