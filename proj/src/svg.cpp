#include "gpplan/svg.hpp"

#include <cmath>
#include <sstream>

namespace gpplan {

namespace {

// Scene coordinates are y-up; SVG is y-down. Flip around the scene midline.
class Mapper {
 public:
  Mapper(const Scene2D& scene, double scale) : scene_(scene), scale_(scale) {}
  double x(double wx) const { return (wx - scene_.bounds_min.x()) * scale_; }
  double y(double wy) const { return (scene_.bounds_max.y() - wy) * scale_; }
  double len(double l) const { return l * scale_; }

 private:
  const Scene2D& scene_;
  double scale_;
};

void drawArmPose(std::ostringstream& out, const Mapper& map, const Robot& robot,
                 const Eigen::VectorXd& q, const std::string& color, double width) {
  if (robot.isArm()) {
    const auto& arm = robot.arm();
    Eigen::Vector2d p = arm.base_position;
    double acc = arm.base_angle;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" points=\"" << map.x(p.x()) << ',' << map.y(p.y());
    for (int k = 0; k < robot.dof(); ++k) {
      acc += q[k];
      p += arm.link_lengths[k] * Eigen::Vector2d(std::cos(acc), std::sin(acc));
      out << ' ' << map.x(p.x()) << ',' << map.y(p.y());
    }
    out << "\"/>\n";
  } else {
    out << "<circle cx=\"" << map.x(q.x()) << "\" cy=\"" << map.y(q.y()) << "\" r=\""
        << map.len(std::max(robot.point().radius, 0.01)) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"" << width << "\"/>\n";
  }
}

}  // namespace

std::string renderSvg(const Scene2D& scene, const Robot& robot, const PlanResult& result) {
  const Eigen::Vector2d extent = scene.bounds_max - scene.bounds_min;
  const double scale = 600.0 / std::max(extent.x(), extent.y());
  const Mapper map(scene, scale);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << extent.x() * scale
      << "\" height=\"" << extent.y() * scale << "\" viewBox=\"0 0 " << extent.x() * scale << ' '
      << extent.y() * scale << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& obstacle : scene.obstacles) {
    std::visit(
        [&](const auto& prim) {
          using T = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<T, BoxObstacle>) {
            out << "<rect x=\"" << map.x(prim.center.x() - prim.half_extents.x()) << "\" y=\""
                << map.y(prim.center.y() + prim.half_extents.y()) << "\" width=\""
                << map.len(2 * prim.half_extents.x()) << "\" height=\""
                << map.len(2 * prim.half_extents.y()) << "\" fill=\"black\"/>\n";
          } else {
            out << "<circle cx=\"" << map.x(prim.center.x()) << "\" cy=\"" << map.y(prim.center.y())
                << "\" r=\"" << map.len(prim.radius) << "\" fill=\"black\"/>\n";
          }
        },
        obstacle);
  }

  const int d = robot.dof();
  const int n = result.trajectory.numStates();
  for (int k = 1; k + 1 < n; ++k)
    drawArmPose(out, map, robot, result.trajectory.states[k].head(d), "#999999", 1.5);

  // End-effector path over the up-sampled trajectory.
  if (result.upsampled.numStates() > 1) {
    out << "<polyline fill=\"none\" stroke=\"#1f77ff\" stroke-width=\"2\" points=\"";
    for (int k = 0; k < result.upsampled.numStates(); ++k) {
      const Eigen::Vector2d ee = robot.endEffector(result.upsampled.states[k].head(d));
      if (k) out << ' ';
      out << map.x(ee.x()) << ',' << map.y(ee.y());
    }
    out << "\"/>\n";
  }

  if (n > 0) drawArmPose(out, map, robot, result.trajectory.states.front().head(d), "green", 3.0);
  if (n > 1) drawArmPose(out, map, robot, result.trajectory.states.back().head(d), "red", 3.0);
  out << "</svg>\n";
  return out.str();
}

}  // namespace gpplan
