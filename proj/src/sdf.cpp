#include "gpplan/sdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gpplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform, lower envelope of parabolas
// (Felzenszwalb-Huttenlocher). f holds squared distances on entry.
void edt1d(const std::vector<double>& f, std::vector<double>& out, std::vector<int>& v,
           std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    while (true) {
      if (f[v[k]] == kInf) {
        // No finite parabola yet; start the envelope here.
        v[k] = q;
        break;
      }
      double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k]) {
        --k;
        continue;
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = kInf;
      break;
    }
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    out[q] = f[v[k]] == kInf ? kInf : dq * dq + f[v[k]];
  }
}

// Exact squared Euclidean distance (in cells) from every cell to the nearest
// seed cell. Cells in `seed` get distance zero.
std::vector<double> edt2d(const std::vector<unsigned char>& seed, int width, int height) {
  std::vector<double> dist(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = seed[i] ? 0.0 : kInf;

  const int longest = std::max(width, height);
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);

  // Columns first, then rows.
  std::vector<double> f(height), out(height);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) f[r] = dist[r * width + c];
    edt1d(f, out, v, z);
    for (int r = 0; r < height; ++r) dist[r * width + c] = out[r];
  }
  f.assign(width, 0.0);
  out.assign(width, 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) f[c] = dist[r * width + c];
    edt1d(f, out, v, z);
    for (int c = 0; c < width; ++c) dist[r * width + c] = out[c];
  }
  return dist;
}

}  // namespace

SignedDistanceField2D::SignedDistanceField2D(Eigen::Vector2d origin, double cell_size,
                                             int width, int height, std::vector<double> values)
    : origin_(std::move(origin)),
      cell_size_(cell_size),
      width_(width),
      height_(height),
      values_(std::move(values)) {
  if (cell_size_ <= 0.0 || width_ < 1 || height_ < 1 ||
      values_.size() != static_cast<std::size_t>(width_) * height_)
    throw std::invalid_argument("SignedDistanceField2D: inconsistent dimensions");
}

SignedDistanceField2D buildSdf(const OccupancyGrid& occupancy) {
  const int w = occupancy.width, h = occupancy.height;
  if (w < 1 || h < 1) throw std::invalid_argument("buildSdf: empty grid");

  std::vector<unsigned char> free_mask(occupancy.occupied.size());
  for (std::size_t i = 0; i < free_mask.size(); ++i) free_mask[i] = occupancy.occupied[i] ? 0 : 1;

  const std::vector<double> to_occupied = edt2d(occupancy.occupied, w, h);
  const std::vector<double> to_free = edt2d(free_mask, w, h);

  const double cap = std::hypot(w * occupancy.cell_size, h * occupancy.cell_size);
  std::vector<double> values(free_mask.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d_occ =
        to_occupied[i] == kInf ? cap : std::sqrt(to_occupied[i]) * occupancy.cell_size;
    const double d_free = to_free[i] == kInf ? cap : std::sqrt(to_free[i]) * occupancy.cell_size;
    values[i] = std::min(d_occ, cap) - std::min(d_free, cap);
  }
  return SignedDistanceField2D(occupancy.origin, occupancy.cell_size, w, h, std::move(values));
}

SignedDistanceField2D sceneSdf(const Scene2D& scene) {
  return buildSdf(rasterize(scene, scene.cell_size));
}

double SignedDistanceField2D::query(const Eigen::Vector2d& point) const {
  if (!point.allFinite())
    throw std::invalid_argument("SignedDistanceField2D::query: non-finite point");
  // Continuous cell-center coordinates.
  const double gx = (point.x() - origin_.x()) / cell_size_ - 0.5;
  const double gy = (point.y() - origin_.y()) / cell_size_ - 0.5;
  const double cx = std::clamp(gx, 0.0, static_cast<double>(width_ - 1));
  const double cy = std::clamp(gy, 0.0, static_cast<double>(height_ - 1));
  const double outside =
      std::hypot((gx - cx) * cell_size_, (gy - cy) * cell_size_);

  const int c0 = std::min(static_cast<int>(std::floor(cx)), width_ - 2 >= 0 ? width_ - 2 : 0);
  const int r0 = std::min(static_cast<int>(std::floor(cy)), height_ - 2 >= 0 ? height_ - 2 : 0);
  const int c1 = std::min(c0 + 1, width_ - 1);
  const int r1 = std::min(r0 + 1, height_ - 1);
  const double fx = cx - c0;
  const double fy = cy - r0;

  const double v00 = valueAt(r0, c0), v01 = valueAt(r0, c1);
  const double v10 = valueAt(r1, c0), v11 = valueAt(r1, c1);
  const double interp = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                        fy * ((1.0 - fx) * v10 + fx * v11);
  return interp + outside;
}

Eigen::Vector2d SignedDistanceField2D::gradient(const Eigen::Vector2d& point) const {
  const double h = cell_size_;
  const Eigen::Vector2d ex(h, 0.0), ey(0.0, h);
  return {(query(point + ex) - query(point - ex)) / (2.0 * h),
          (query(point + ey) - query(point - ey)) / (2.0 * h)};
}

std::string SignedDistanceField2D::toCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "width,height,cell_size,origin_x,origin_y\n";
  out << width_ << ',' << height_ << ',' << cell_size_ << ',' << origin_.x() << ','
      << origin_.y() << '\n';
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (c) out << ',';
      out << valueAt(r, c);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace gpplan
