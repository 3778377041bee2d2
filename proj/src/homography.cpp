#include "mmwcarry/homography.hpp"

#include <cmath>
#include <stdexcept>

namespace mmw {

namespace {

Eigen::Matrix3d canonical(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) throw std::invalid_argument("homography has non-finite entries");
  const double n = m.norm();
  if (n == 0.0) throw std::invalid_argument("homography is zero");
  Eigen::Matrix3d out = m / n;
  if (std::abs(out.determinant()) < 1e-14) throw std::invalid_argument("homography is singular");
  if (out(2, 2) < 0.0) out = -out;
  return out;
}

}  // namespace

Homography::Homography(const Eigen::Matrix3d& m) : h_(canonical(m)) {}

Homography Homography::inverse() const { return Homography(h_.inverse()); }

Vec2 project(const Eigen::Matrix3d& h, double u, double v) {
  const Eigen::Vector3d p = h * Eigen::Vector3d(u, v, 1.0);
  const double scale = h.row(2).cwiseAbs().sum() * (std::abs(u) + std::abs(v) + 1.0);
  if (!(std::abs(p.z()) > 1e-12 * scale)) throw std::domain_error("point at infinity");
  return {p.x() / p.z(), p.y() / p.z()};
}

Vec2 project(const Homography& h, double u, double v) { return project(h.matrix(), u, v); }

Homography camera_to_floor_homography(double focal_px, double cx, double cy, double height_m,
                                      double pitch_deg) {
  const double c = std::cos(deg2rad(pitch_deg));
  const double s = std::sin(deg2rad(pitch_deg));
  const double h = height_m;
  // Floor point (x, y) in camera axes: X = x, Y = h*c - y*s, Z = y*c + h*s.
  Eigen::Matrix3d g;
  g << focal_px, cx * c, cx * h * s,
       0.0, -focal_px * s + cy * c, focal_px * h * c + cy * h * s,
       0.0, c, h * s;
  return Homography(g.inverse());
}

}  // namespace mmw
