#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mmw {

/// Antenna position in wavelength units: x is horizontal, z vertical.
struct AntennaPosition {
  double x = 0.0;
  double z = 0.0;
};

/// FMCW TDM-MIMO waveform and array configuration. All values are SI.
struct RadarConfig {
  double carrier_frequency_hz = 77e9;
  double bandwidth_hz = 2.5e9;
  double sweep_slope_hz_per_s = 79e12;
  double sample_rate_hz = 8e6;
  int chirps_per_frame = 50;
  int samples_per_chirp = 256;
  double chirp_duration_s = 540e-6;
  double frame_duration_s = 1.0 / 30.0;
  std::vector<AntennaPosition> tx_positions;
  std::vector<AntennaPosition> rx_positions;
  /// Complex noise variance per IF sample (linear).
  double noise_power = 1e-4;
  int azimuth_fft_size = 128;
  int elevation_fft_size = 10;

  double wavelength_m() const;
};

struct DerivedSpecs {
  double range_resolution_m = 0.0;
  double max_range_m = 0.0;
  int n_virtual = 0;
  double range_bin_width_m = 0.0;
  int azimuth_bins = 0;
  int elevation_bins = 0;
};

/// 16-element lambda/2 RX line plus a 4x3 TX grid (8 lambda horizontal,
/// 1 lambda vertical), which tiles a contiguous 64x3 virtual grid.
std::vector<AntennaPosition> default_tx_positions();
std::vector<AntennaPosition> default_rx_positions();

/// Default 77 GHz waveform with the 12 TX x 16 RX array geometry.
RadarConfig default_radar_config();

/// Lists every violated invariant; empty means valid.
std::vector<std::string> validate(const RadarConfig& cfg);

/// Throws std::invalid_argument naming the violated invariants.
DerivedSpecs derive_specs(const RadarConfig& cfg);

/// Keys mirror the struct member names (e.g. `bandwidth_hz: 2.5e9`).
/// Missing keys keep their defaults.
RadarConfig load_radar_config(const std::filesystem::path& path);
RadarConfig parse_radar_config(const std::string& text);
std::string to_yaml(const RadarConfig& cfg);

}  // namespace mmw
