#pragma once

#include <array>
#include <span>
#include <vector>

#include "mmwcarry/radar_config.hpp"
#include "mmwcarry/scene_sim.hpp"
#include "mmwcarry/types.hpp"

namespace mmw {

struct VirtualElement {
  double x = 0.0;  // wavelengths
  double z = 0.0;
  int tx = 0;
  int rx = 0;
  int h = 0;  // horizontal grid index
  int v = 0;  // vertical grid index
};

/// Virtual array at the spatial convolution of TX and RX positions, snapped
/// onto a uniform (h, v) grid. Elements sharing a grid cell are averaged.
struct VirtualArray {
  std::vector<VirtualElement> elements;  // ordered tx-major, rx-minor
  int n_h = 1;
  int n_v = 1;
  double pitch_h = 0.5;
  double pitch_v = 1.0;
  bool has_duplicates = false;
  std::vector<int> multiplicity;  // per grid cell, v-major

  const VirtualElement& at(int tx, int rx) const { return elements[static_cast<std::size_t>(tx) * n_rx + rx]; }
  int n_rx = 1;
};

VirtualArray form_virtual_array(std::span<const AntennaPosition> tx, std::span<const AntennaPosition> rx);

/// Non-negative magnitudes indexed [range][azimuth][elevation]. The angle axes
/// are fft-shifted, so the zero-frequency (boresight) bin sits at n/2.
class RadarCube3D {
 public:
  RadarCube3D() = default;
  RadarCube3D(int n_range, int n_az, int n_el, double range_bin_width_m, double pitch_h, double pitch_v)
      : nr_(n_range), na_(n_az), ne_(n_el), range_bin_width_(range_bin_width_m), pitch_h_(pitch_h),
        pitch_v_(pitch_v), data_(static_cast<std::size_t>(n_range) * n_az * n_el, 0.0f) {}

  int range_bins() const { return nr_; }
  int azimuth_bins() const { return na_; }
  int elevation_bins() const { return ne_; }
  double range_bin_width_m() const { return range_bin_width_; }
  double pitch_h() const { return pitch_h_; }
  double pitch_v() const { return pitch_v_; }

  std::size_t index(int r, int a, int e) const { return (static_cast<std::size_t>(r) * na_ + a) * ne_ + e; }
  float& operator()(int r, int a, int e) { return data_[index(r, a, e)]; }
  float operator()(int r, int a, int e) const { return data_[index(r, a, e)]; }
  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  double range_m(int bin) const { return bin * range_bin_width_; }
  /// Direction sine of an azimuth bin; NaN outside the visible region.
  double azimuth_sine(int bin) const;
  double azimuth_deg(int bin) const;
  double elevation_deg(int bin) const;
  /// Nearest bins for a physical coordinate (azimuth clamps, elevation wraps).
  int range_bin_of(double range_m) const;
  int azimuth_bin_of(double azimuth_deg) const;

 private:
  int nr_ = 0, na_ = 0, ne_ = 0;
  double range_bin_width_ = 1.0;
  double pitch_h_ = 0.5;
  double pitch_v_ = 1.0;
  std::vector<float> data_;
};

/// Range x azimuth map, elevation collapsed by summation.
struct RangeAzimuthMap {
  int rows = 0;  // range
  int cols = 0;  // azimuth
  std::vector<double> values;
  double range_bin_width_m = 1.0;
  std::vector<double> azimuth_deg;  // per column

  double at(int r, int a) const { return values[static_cast<std::size_t>(r) * cols + a]; }
  double& at(int r, int a) { return values[static_cast<std::size_t>(r) * cols + a]; }
};

RangeAzimuthMap range_azimuth_map(const RadarCube3D& cube);

enum class Window { rectangular, hann };

/// Range FFT per (chirp, tx, rx), then a zero-padded 2D FFT over the
/// horizontal/vertical virtual grid per (chirp, range bin); magnitudes are
/// summed over chirps. OpenMP-parallel over independent streams/range bins.
RadarCube3D image_3d(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg,
                     Window window = Window::rectangular);

/// Serial reference: separable direct DFTs, no FFT library.
RadarCube3D image_3d_reference(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg,
                               Window window = Window::rectangular);

struct CroppedCube {
  static constexpr int kRange = 24;
  static constexpr int kAzimuth = 24;
  static constexpr int kElevation = 10;
  static constexpr std::size_t kSize = static_cast<std::size_t>(kRange) * kAzimuth * kElevation;

  std::array<float, kSize> data{};
  double center_range_m = 0.0;
  double center_azimuth_deg = 0.0;

  static constexpr std::size_t index(int r, int a, int e) {
    return (static_cast<std::size_t>(r) * kAzimuth + a) * kElevation + e;
  }
  float operator()(int r, int a, int e) const { return data[index(r, a, e)]; }
  float& operator()(int r, int a, int e) { return data[index(r, a, e)]; }
  float peak() const;
};

/// 24 x 24 window around the region center over the full elevation axis;
/// cells outside the cube are zero. Throws std::out_of_range when the center
/// lies outside the cube. The cube must have exactly 10 elevation bins.
CroppedCube crop_and_pad(const RadarCube3D& cube, const OccupancyRegion& region);

/// Multiplies every cell by the squared center range. Throws
/// std::invalid_argument for a non-positive range.
CroppedCube range_compensate(CroppedCube cc);

}  // namespace mmw
