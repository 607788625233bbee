#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gpplan/scene.hpp"

namespace gpplan {

/// Signed clearance grid: positive outside obstacles, negative inside,
/// values sampled at cell centers. Immutable after construction; concurrent
/// queries are safe.
class SignedDistanceField2D {
 public:
  SignedDistanceField2D() = default;
  SignedDistanceField2D(Eigen::Vector2d origin, double cell_size, int width, int height,
                        std::vector<double> values);

  /// Bilinear interpolation of the four surrounding cell values. Points
  /// outside the grid clamp to the boundary cell and add their Euclidean
  /// distance to the sampled boundary domain.
  double query(const Eigen::Vector2d& point) const;

  /// Central-difference gradient of query with step h = cell_size.
  Eigen::Vector2d gradient(const Eigen::Vector2d& point) const;

  double valueAt(int row, int col) const { return values_[row * width_ + col]; }
  int width() const { return width_; }
  int height() const { return height_; }
  double cellSize() const { return cell_size_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  Eigen::Vector2d cellCenter(int row, int col) const {
    return origin_ + Eigen::Vector2d((col + 0.5) * cell_size_, (row + 0.5) * cell_size_);
  }

  /// Debug dump: header line naming the metadata fields, a line with their
  /// values, then the row-major grid.
  std::string toCsv() const;

 private:
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  double cell_size_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Exact Euclidean distance transform of the occupancy grid, signed:
/// distance-to-occupied minus distance-to-free, measured between cell
/// centers. Grids with one phase absent cap the distance at the grid
/// diagonal instead of infinity.
SignedDistanceField2D buildSdf(const OccupancyGrid& occupancy);

/// Convenience: rasterize + buildSdf with the scene's cell size.
SignedDistanceField2D sceneSdf(const Scene2D& scene);

}  // namespace gpplan
