#pragma once

#include <deque>
#include <filesystem>
#include <vector>

#include "mmwcarry/homography.hpp"
#include "mmwcarry/imaging.hpp"
#include "mmwcarry/types.hpp"

namespace mmw {

struct PointCorrespondence {
  double u = 0.0;  // px
  double v = 0.0;
  double x = 0.0;  // m, radar plane
  double y = 0.0;
};

/// Normalized DLT. Throws std::invalid_argument("insufficient correspondences")
/// below 4 points and std::invalid_argument("degenerate configuration") when
/// the points do not pin down a unique map.
Homography estimate_homography(const std::vector<PointCorrespondence>& corrs);

/// Radar-plane distance between the projection of (u, v) and (x, y).
double reprojection_error(const Homography& h, const PointCorrespondence& c);

/// Error on each held-out point of a fit to the remaining ones (needs >= 5).
std::vector<double> leave_one_out_errors(const std::vector<PointCorrespondence>& corrs);

/// Lines of "u v x y"; blank lines and '#' comments are skipped.
std::vector<PointCorrespondence> load_correspondences(const std::filesystem::path& path);

/// Center from the box's bottom-center pixel, width from its two bottom
/// vertices, length as given.
OccupancyRegion occupancy_region(const Homography& h, const Detection& box, double length_m = 1.0);

struct RefineParams {
  double azimuth_tolerance_deg = 2.0;
  double range_tolerance_m = 0.5;
  int offset_window = 50;
  /// A peak counts when it exceeds this multiple of the map median.
  double noise_floor_factor = 3.0;
};

/// Running mean over the last `offset_window` snap offsets of one stream.
struct OffsetState {
  std::deque<Vec2> offsets;
  Vec2 mean() const;
};

struct RefineResult {
  OccupancyRegion region;
  bool snapped = false;
};

double noise_floor(const RangeAzimuthMap& ra, const RefineParams& params = {});

/// Applies the running offset to the projected center, then snaps to the
/// strongest map cell within the range/azimuth tolerances. A snap records
/// (peak - projected) in the offset window; with no cell above the noise
/// floor the region is returned with only the running offset applied.
RefineResult refine_center(const OccupancyRegion& region, const RangeAzimuthMap& ra, double floor,
                           OffsetState& state, const RefineParams& params = {});
RefineResult refine_center(const OccupancyRegion& region, const RadarCube3D& cube, OffsetState& state,
                           const RefineParams& params = {});

}  // namespace mmw
