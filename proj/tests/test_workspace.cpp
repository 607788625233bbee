#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpplan/scene.hpp"
#include "gpplan/sdf.hpp"
#include "test_helpers.hpp"

using namespace gpplan;
namespace tt = gpplan::testing;

namespace {

Scene2D emptyScene(double size = 1.0, double cell = 0.05) {
  Scene2D scene;
  scene.bounds_min = {0.0, 0.0};
  scene.bounds_max = {size, size};
  scene.cell_size = cell;
  return scene;
}

// Brute-force signed distance between cell centers of the rasterized scene.
double bruteForceSigned(const OccupancyGrid& grid, const Eigen::Vector2d& p) {
  double best_occ = std::numeric_limits<double>::infinity();
  double best_free = std::numeric_limits<double>::infinity();
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const double dist = (grid.cellCenter(r, c) - p).norm();
      if (grid.at(r, c))
        best_occ = std::min(best_occ, dist);
      else
        best_free = std::min(best_free, dist);
    }
  }
  const double cap = std::hypot(grid.width * grid.cell_size, grid.height * grid.cell_size);
  best_occ = std::min(best_occ, cap);
  best_free = std::min(best_free, cap);
  return best_occ - best_free;
}

}  // namespace

TEST_CASE("rasterize marks cells by their centers") {
  Scene2D scene = emptyScene(1.0, 0.1);
  scene.obstacles.push_back(BoxObstacle{{0.45, 0.45}, {0.1, 0.1}});
  const OccupancyGrid grid = rasterize(scene, 0.1);
  CHECK(grid.width == 10);
  CHECK(grid.height == 10);
  CHECK(grid.at(4, 4));      // center (0.45, 0.45) inside
  CHECK(grid.at(3, 3));      // center (0.35, 0.35) on the corner boundary
  CHECK(!grid.at(6, 4));     // center (0.45, 0.65) outside
  CHECK_THROWS_AS(rasterize(scene, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(scene, 2.0), std::invalid_argument);
}

TEST_CASE("all-free grid caps at the diagonal") {
  const OccupancyGrid grid = rasterize(emptyScene(1.0, 0.1), 0.1);
  const SignedDistanceField2D sdf = buildSdf(grid);
  const double cap = std::hypot(1.0, 1.0);
  for (int r = 0; r < sdf.height(); ++r)
    for (int c = 0; c < sdf.width(); ++c) CHECK(sdf.valueAt(r, c) == doctest::Approx(cap));
}

TEST_CASE("single occupied cell: exact axis-aligned distances") {
  Scene2D scene = emptyScene(1.0, 0.1);
  // Occupy exactly the cell whose center is (0.55, 0.55).
  scene.obstacles.push_back(BoxObstacle{{0.55, 0.55}, {0.049, 0.049}});
  const OccupancyGrid grid = rasterize(scene, 0.1);
  int occupied_count = 0;
  for (unsigned char o : grid.occupied) occupied_count += o;
  REQUIRE(occupied_count == 1);

  const SignedDistanceField2D sdf = buildSdf(grid);
  CHECK(sdf.valueAt(5, 8) == doctest::Approx(0.3));  // 3 cells away along x
  CHECK(sdf.valueAt(8, 5) == doctest::Approx(0.3));
  CHECK(sdf.valueAt(5, 5) == doctest::Approx(-0.1));  // inside, one cell to free
}

TEST_CASE("disk obstacle: negative inside, about -r at the center") {
  Scene2D scene = emptyScene(2.0, 0.02);
  const double r = 0.3;
  scene.obstacles.push_back(DiskObstacle{{1.0, 1.0}, r});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  const double center_value = sdf.query({1.0, 1.0});
  CHECK(center_value < 0.0);
  CHECK(std::abs(center_value + r) <= scene.cell_size + 1e-12);
}

TEST_CASE("EDT matches brute force on random scenes") {
  for (int trial = 0; trial < 3; ++trial) {
    Scene2D scene = emptyScene(1.0, 1.0 / 24.0);
    scene.obstacles.push_back(
        DiskObstacle{{tt::uniform(0.2, 0.8), tt::uniform(0.2, 0.8)}, tt::uniform(0.08, 0.2)});
    scene.obstacles.push_back(
        BoxObstacle{{tt::uniform(0.2, 0.8), tt::uniform(0.2, 0.8)},
                    {tt::uniform(0.05, 0.15), tt::uniform(0.05, 0.15)}});
    const OccupancyGrid grid = rasterize(scene, scene.cell_size);
    const SignedDistanceField2D sdf = buildSdf(grid);
    for (int r = 0; r < grid.height; ++r)
      for (int c = 0; c < grid.width; ++c)
        CHECK(sdf.valueAt(r, c) ==
              doctest::Approx(bruteForceSigned(grid, grid.cellCenter(r, c))).epsilon(1e-12));
  }
}

TEST_CASE("query: cell-center passthrough, bilinear midpoints, brute-force agreement") {
  Scene2D scene = emptyScene(1.0, 0.05);
  scene.obstacles.push_back(DiskObstacle{{0.5, 0.5}, 0.15});
  const OccupancyGrid grid = rasterize(scene, scene.cell_size);
  const SignedDistanceField2D sdf = buildSdf(grid);

  CHECK(sdf.query(sdf.cellCenter(3, 7)) == doctest::Approx(sdf.valueAt(3, 7)));
  const Eigen::Vector2d mid =
      0.5 * (sdf.cellCenter(3, 7) + sdf.cellCenter(3, 8));
  CHECK(sdf.query(mid) == doctest::Approx(0.5 * (sdf.valueAt(3, 7) + sdf.valueAt(3, 8))));

  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d p(tt::uniform(0.05, 0.95), tt::uniform(0.05, 0.95));
    CHECK(std::abs(sdf.query(p) - bruteForceSigned(grid, p)) <= 2.0 * scene.cell_size);
  }
}

TEST_CASE("out-of-bounds queries add the distance to the sampled domain") {
  const SignedDistanceField2D sdf = buildSdf(rasterize(emptyScene(1.0, 0.1), 0.1));
  // Boundary cell-center domain is [0.05, 0.95]^2.
  const double at_edge = sdf.query({0.05, 0.5});
  CHECK(sdf.query({-0.95, 0.5}) == doctest::Approx(at_edge + 1.0));
  CHECK(sdf.query({0.05, 0.5}) == doctest::Approx(sdf.query({0.0, 0.5}) - 0.05));
}

TEST_CASE("query continuity") {
  Scene2D scene = emptyScene(1.0, 0.04);
  scene.obstacles.push_back(BoxObstacle{{0.4, 0.6}, {0.15, 0.1}});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d p(tt::uniform(-0.2, 1.2), tt::uniform(-0.2, 1.2));
    const Eigen::Vector2d d(tt::uniform(-0.05, 0.05), tt::uniform(-0.05, 0.05));
    CHECK(std::abs(sdf.query(p) - sdf.query(p + d)) <= d.norm() + 2.0 * scene.cell_size);
  }
}

TEST_CASE("grid Lipschitz bounds") {
  Scene2D scene = emptyScene(1.0, 0.04);
  scene.obstacles.push_back(DiskObstacle{{0.35, 0.35}, 0.12});
  scene.obstacles.push_back(BoxObstacle{{0.7, 0.7}, {0.08, 0.12}});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  const double cell = scene.cell_size;
  for (int r = 0; r + 1 < sdf.height(); ++r) {
    for (int c = 0; c + 1 < sdf.width(); ++c) {
      for (auto [dr, dc] : {std::pair{0, 1}, {1, 0}, {1, 1}}) {
        const double a = sdf.valueAt(r, c);
        const double b = sdf.valueAt(r + dr, c + dc);
        const double step = cell * std::hypot(double(dr), double(dc));
        if (a * b >= 0.0) {
          // Same phase: each distance component is 1-Lipschitz.
          CHECK(std::abs(a - b) <= step + 1e-12);
        } else {
          // Sign crossing: both components change, doubling the bound.
          CHECK(std::abs(a - b) <= 2.0 * step + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sign correctness at centroids and far corners") {
  Scene2D scene = emptyScene(2.0, 0.02);
  scene.obstacles.push_back(DiskObstacle{{1.4, 1.2}, 0.2});
  scene.obstacles.push_back(BoxObstacle{{0.6, 1.5}, {0.15, 0.1}});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  CHECK(sdf.query({1.4, 1.2}) < 0.0);
  CHECK(sdf.query({0.6, 1.5}) < 0.0);
  CHECK(sdf.query({0.05, 0.05}) > 0.0);
  CHECK(sdf.query({1.95, 0.05}) > 0.0);
}

TEST_CASE("gradient points away from a wall and respects symmetry") {
  // Wall along the left edge.
  Scene2D scene = emptyScene(2.0, 0.02);
  scene.obstacles.push_back(BoxObstacle{{0.1, 1.0}, {0.1, 1.0}});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  const Eigen::Vector2d g = sdf.gradient({0.8, 1.0});
  CHECK(std::abs(g.x() - 1.0) <= 0.1);
  CHECK(std::abs(g.y()) <= 0.1);

  // Symmetric pair of disks: the x-component vanishes on the midline.
  Scene2D pair = emptyScene(2.0, 0.02);
  pair.obstacles.push_back(DiskObstacle{{0.6, 1.0}, 0.2});
  pair.obstacles.push_back(DiskObstacle{{1.4, 1.0}, 0.2});
  const SignedDistanceField2D sdf2 = sceneSdf(pair);
  CHECK(std::abs(sdf2.gradient({1.0, 0.6}).x()) < 1e-9);

  // Sampled gradient magnitude stays near or below 1.
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector2d p(tt::uniform(0.05, 1.95), tt::uniform(0.05, 1.95));
    CHECK(sdf2.gradient(p).norm() <= 1.2);
  }
}

TEST_CASE("scene JSON parsing and validation") {
  const Scene2D scene = parseScene(R"({
    "bounds": {"min": [-1.0, -2.0], "max": [3.0, 2.0]},
    "cell_size": 0.05,
    "obstacles": [
      {"type": "box", "center": [1.0, 0.0], "half_extents": [0.5, 0.25]},
      {"type": "disk", "center": [-0.5, 1.0], "radius": 0.4}
    ]})");
  CHECK(scene.obstacles.size() == 2);
  CHECK(scene.cell_size == 0.05);
  CHECK(insideObstacle(scene, {1.0, 0.1}));
  CHECK(!insideObstacle(scene, {1.0, 0.5}));

  // Round trip through sceneToJson.
  const Scene2D again = parseScene(sceneToJson(scene));
  CHECK(again.bounds_min == scene.bounds_min);
  CHECK(again.obstacles.size() == scene.obstacles.size());

  CHECK_THROWS_AS(parseScene("{"), std::invalid_argument);
  CHECK_THROWS_AS(parseScene(R"({"bounds": {"min": [0,0], "max": [0,1]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parseScene(R"({"bounds": {"min": [0,0], "max": [1,1]},
    "obstacles": [{"type": "disk", "center": [5,5], "radius": 0.1}]})"),
                  std::invalid_argument);
}

TEST_CASE("sdf csv dump") {
  Scene2D scene = emptyScene(0.3, 0.1);
  scene.obstacles.push_back(DiskObstacle{{0.15, 0.15}, 0.06});
  const SignedDistanceField2D sdf = sceneSdf(scene);
  const std::string csv = sdf.toCsv();
  CHECK(csv.rfind("width,height,cell_size,origin_x,origin_y\n3,3,0.1", 0) == 0);
  // Header + metadata + one line per row.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + sdf.height());
}
