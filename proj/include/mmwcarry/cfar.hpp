#pragma once

#include <vector>

#include "mmwcarry/imaging.hpp"

namespace mmw {

struct DetectionPoint {
  double range_m = 0.0;
  double azimuth_deg = 0.0;
  double magnitude = 0.0;
  int row = 0;  // range bin
  int col = 0;  // azimuth bin
};

struct CfarParams {
  int guard = 2;  // cells per side
  int train = 8;  // cells per side beyond the guard band
  double pfa = 1e-3;
};

/// CA-CFAR scale for n training cells of exponential power:
/// alpha = n * (pfa^(-1/n) - 1).
double cfar_alpha(int n_train, double pfa);

/// 2D cell-averaging CFAR over a power map. A cell is declared when its value
/// exceeds alpha * mean(training ring); the ring is truncated at map edges
/// and alpha recomputed for the reduced cell count. Throws
/// std::invalid_argument for bad parameters or a map smaller than the window.
std::vector<DetectionPoint> ca_cfar_2d(const RangeAzimuthMap& power, const CfarParams& params = {});

/// Keeps points whose cell power changed by at least `threshold_db` against
/// the previous frame's map. No previous map: nothing passes.
std::vector<DetectionPoint> filter_non_static(const std::vector<DetectionPoint>& points,
                                              const RangeAzimuthMap& current, const RangeAzimuthMap* previous,
                                              double threshold_db = 3.0);

struct Centroid {
  Vec2 position;  // radar plane (m)
  double range_m = 0.0;
  double azimuth_deg = 0.0;
  double magnitude = 0.0;  // summed
  int count = 0;
};

/// Density clustering (DBSCAN) on radar-plane Cartesian positions with
/// `radius_m`; clusters smaller than `min_points` are discarded. Centroids are
/// magnitude-weighted means of the member positions. The result does not
/// depend on input order.
std::vector<Centroid> cluster(std::vector<DetectionPoint> points, double radius_m, int min_points);

Vec2 to_cartesian(double range_m, double azimuth_deg);

}  // namespace mmw
