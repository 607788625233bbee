#include "gpplan/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gpplan {

bool insideObstacle(const Scene2D& scene, const Eigen::Vector2d& point) {
  for (const auto& obstacle : scene.obstacles) {
    const bool hit = std::visit(
        [&](const auto& prim) -> bool {
          using T = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<T, BoxObstacle>) {
            const Eigen::Vector2d d = (point - prim.center).cwiseAbs();
            return d.x() <= prim.half_extents.x() && d.y() <= prim.half_extents.y();
          } else {
            return (point - prim.center).norm() <= prim.radius;
          }
        },
        obstacle);
    if (hit) return true;
  }
  return false;
}

OccupancyGrid rasterize(const Scene2D& scene, double cell_size) {
  if (cell_size <= 0.0) throw std::invalid_argument("rasterize: cell_size must be > 0");
  const Eigen::Vector2d extent = scene.bounds_max - scene.bounds_min;
  if (cell_size > extent.x() || cell_size > extent.y())
    throw std::invalid_argument("rasterize: cell_size larger than scene bounds");

  OccupancyGrid grid;
  grid.origin = scene.bounds_min;
  grid.cell_size = cell_size;
  grid.width = static_cast<int>(std::ceil(extent.x() / cell_size));
  grid.height = static_cast<int>(std::ceil(extent.y() / cell_size));
  grid.occupied.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);
  for (int r = 0; r < grid.height; ++r)
    for (int c = 0; c < grid.width; ++c)
      if (insideObstacle(scene, grid.cellCenter(r, c))) grid.occupied[r * grid.width + c] = 1;
  return grid;
}

namespace {

using nlohmann::json;

Eigen::Vector2d parseVec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string("scene: expected [x, y] for ") + what);
  return {j[0].get<double>(), j[1].get<double>()};
}

bool intersectsBounds(const Scene2D& scene, const Obstacle& obstacle) {
  return std::visit(
      [&](const auto& prim) -> bool {
        using T = std::decay_t<decltype(prim)>;
        Eigen::Vector2d lo, hi;
        if constexpr (std::is_same_v<T, BoxObstacle>) {
          lo = prim.center - prim.half_extents;
          hi = prim.center + prim.half_extents;
        } else {
          lo = prim.center.array() - prim.radius;
          hi = prim.center.array() + prim.radius;
        }
        return (lo.array() <= scene.bounds_max.array()).all() &&
               (hi.array() >= scene.bounds_min.array()).all();
      },
      obstacle);
}

}  // namespace

Scene2D parseScene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene: invalid JSON: ") + e.what());
  }

  Scene2D scene;
  if (!j.contains("bounds")) throw std::invalid_argument("scene: missing bounds");
  scene.bounds_min = parseVec2(j["bounds"].at("min"), "bounds.min");
  scene.bounds_max = parseVec2(j["bounds"].at("max"), "bounds.max");
  if ((scene.bounds_max - scene.bounds_min).minCoeff() <= 0.0)
    throw std::invalid_argument("scene: bounds must have positive area");
  scene.cell_size = j.value("cell_size", 0.01);
  if (scene.cell_size <= 0.0) throw std::invalid_argument("scene: cell_size must be > 0");

  for (const auto& jo : j.value("obstacles", json::array())) {
    const std::string type = jo.at("type").get<std::string>();
    Obstacle obstacle;
    if (type == "box") {
      BoxObstacle box;
      box.center = parseVec2(jo.at("center"), "box.center");
      box.half_extents = parseVec2(jo.at("half_extents"), "box.half_extents");
      if (box.half_extents.minCoeff() <= 0.0)
        throw std::invalid_argument("scene: box half_extents must be > 0");
      obstacle = box;
    } else if (type == "disk") {
      DiskObstacle disk;
      disk.center = parseVec2(jo.at("center"), "disk.center");
      disk.radius = jo.at("radius").get<double>();
      if (disk.radius <= 0.0) throw std::invalid_argument("scene: disk radius must be > 0");
      obstacle = disk;
    } else {
      throw std::invalid_argument("scene: unknown obstacle type '" + type + "'");
    }
    if (!intersectsBounds(scene, obstacle))
      throw std::invalid_argument("scene: obstacle does not intersect bounds");
    scene.obstacles.push_back(obstacle);
  }
  return scene;
}

Scene2D loadScene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scene: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseScene(buf.str());
}

std::string sceneToJson(const Scene2D& scene) {
  json j;
  j["bounds"]["min"] = {scene.bounds_min.x(), scene.bounds_min.y()};
  j["bounds"]["max"] = {scene.bounds_max.x(), scene.bounds_max.y()};
  j["cell_size"] = scene.cell_size;
  j["obstacles"] = json::array();
  for (const auto& obstacle : scene.obstacles) {
    json jo;
    std::visit(
        [&](const auto& prim) {
          using T = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<T, BoxObstacle>) {
            jo["type"] = "box";
            jo["center"] = {prim.center.x(), prim.center.y()};
            jo["half_extents"] = {prim.half_extents.x(), prim.half_extents.y()};
          } else {
            jo["type"] = "disk";
            jo["center"] = {prim.center.x(), prim.center.y()};
            jo["radius"] = prim.radius;
          }
        },
        obstacle);
    j["obstacles"].push_back(jo);
  }
  return j.dump(2);
}

}  // namespace gpplan
