#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>
#include <vector>

namespace gpplan {

struct BoxObstacle {
  Eigen::Vector2d center;
  Eigen::Vector2d half_extents;
};

struct DiskObstacle {
  Eigen::Vector2d center;
  double radius = 0.0;
};

using Obstacle = std::variant<BoxObstacle, DiskObstacle>;

/// Axis-aligned planar workspace with primitive obstacles.
struct Scene2D {
  Eigen::Vector2d bounds_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d bounds_max = Eigen::Vector2d::Zero();
  double cell_size = 0.01;  // default SDF resolution for this scene
  std::vector<Obstacle> obstacles;
};

/// True when the point lies inside (or on) any obstacle primitive.
bool insideObstacle(const Scene2D& scene, const Eigen::Vector2d& point);

/// Binary occupancy raster over the scene bounds; cells are occupied when
/// their center lies inside a primitive. Row-major, row = y index.
struct OccupancyGrid {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  // lower-left corner
  double cell_size = 0.0;
  int width = 0;
  int height = 0;
  std::vector<unsigned char> occupied;

  Eigen::Vector2d cellCenter(int row, int col) const {
    return origin + Eigen::Vector2d((col + 0.5) * cell_size, (row + 0.5) * cell_size);
  }
  bool at(int row, int col) const { return occupied[row * width + col] != 0; }
};

OccupancyGrid rasterize(const Scene2D& scene, double cell_size);

/// Parses the scene JSON format; throws std::invalid_argument on malformed
/// or inconsistent input (primitive outside bounds, empty bounds).
Scene2D parseScene(const std::string& json_text);
Scene2D loadScene(const std::string& path);
std::string sceneToJson(const Scene2D& scene);

}  // namespace gpplan
