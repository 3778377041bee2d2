#pragma once

#include <Eigen/Dense>

#include "mmwcarry/types.hpp"

namespace mmw {

/// Camera-plane to radar-plane projective map, stored canonically:
/// unit Frobenius norm and non-negative bottom-right entry.
class Homography {
 public:
  Homography() : h_(Eigen::Matrix3d::Identity() / std::sqrt(3.0)) {}
  /// Normalizes; throws std::invalid_argument for a singular or non-finite matrix.
  explicit Homography(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const { return h_; }
  Homography inverse() const;

 private:
  Eigen::Matrix3d h_;
};

/// Dehomogenized H * [u, v, 1]. Throws std::domain_error("point at infinity")
/// when the homogeneous scale vanishes.
Vec2 project(const Homography& h, double u, double v);
Vec2 project(const Eigen::Matrix3d& h, double u, double v);

/// Ground-to-image map of a pinhole camera at `height_m` above the floor,
/// looking along +y and pitched down by `pitch_deg`; the returned homography is
/// its inverse (image -> floor), expressed in radar-plane coordinates.
Homography camera_to_floor_homography(double focal_px, double cx, double cy, double height_m,
                                      double pitch_deg);

}  // namespace mmw
