#pragma once

#include <string>

#include "gpplan/problem.hpp"

namespace gpplan {

/// Renders the scene, the robot poses at the support times (start green,
/// goal red, intermediate gray), and the end-effector path over the
/// up-sampled trajectory (blue). Pure post-processing over a finished
/// result.
std::string renderSvg(const Scene2D& scene, const Robot& robot, const PlanResult& result);

}  // namespace gpplan
