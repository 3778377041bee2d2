#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace mmw {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Carried-object classes, in the column order used by every log and head.
enum class CarryClass : int { laptop = 0, phone = 1, knife = 2 };
inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<std::string_view, kNumClasses> kClassNames{"laptop", "phone", "knife"};

using ClassFlags = std::array<bool, kNumClasses>;

/// Axis-aligned box given by its center and size. Used for camera boxes (px)
/// and for fixed-size radar-plane boxes around centroids (m).
struct Detection {
  double u = 0.0;
  double v = 0.0;
  double w = 1.0;
  double l = 1.0;
  double confidence = 1.0;

  double left() const { return u - 0.5 * w; }
  double right() const { return u + 0.5 * w; }
  double top() const { return v - 0.5 * l; }
  double bottom() const { return v + 0.5 * l; }
};

/// Radar-plane footprint of one subject.
struct OccupancyRegion {
  Vec2 center;
  double width = 0.0;
  double length = 0.0;
};

}  // namespace mmw
