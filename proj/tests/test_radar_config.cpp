#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mmwcarry/radar_config.hpp"
#include "mmwcarry/types.hpp"

using namespace mmw;

namespace {

bool has_violation(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(RadarConfig, DefaultRangeResolution) {
  const auto d = derive_specs(default_radar_config());
  // c / (2B) with B = 2.5 GHz
  EXPECT_NEAR(d.range_resolution_m, 0.06, 5e-4);
  EXPECT_NEAR(d.range_resolution_m, kSpeedOfLight / (2.0 * 2.5e9), 1e-15);
}

TEST(RadarConfig, DefaultMaxRange) {
  const auto d = derive_specs(default_radar_config());
  EXPECT_EQ(std::lround(d.max_range_m), 15);
  EXPECT_NEAR(d.max_range_m, 8e6 * kSpeedOfLight / (2.0 * 79e12), 1e-12);
  // 15.19 m is the same formula with c rounded to 3e8 m/s.
  EXPECT_NEAR(d.max_range_m * 3e8 / kSpeedOfLight, 15.19, 0.005);
}

TEST(RadarConfig, VirtualElementCount) {
  const auto cfg = default_radar_config();
  EXPECT_EQ(cfg.tx_positions.size(), 12u);
  EXPECT_EQ(cfg.rx_positions.size(), 16u);
  EXPECT_EQ(derive_specs(cfg).n_virtual, 192);
}

TEST(RadarConfig, RangeBinWidthWindow) {
  const auto d = derive_specs(default_radar_config());
  EXPECT_GE(d.range_bin_width_m, 0.059);
  EXPECT_LE(d.range_bin_width_m, 0.060);
  EXPECT_DOUBLE_EQ(d.range_bin_width_m, d.max_range_m / 256.0);
  EXPECT_EQ(d.azimuth_bins, 128);
  EXPECT_EQ(d.elevation_bins, 10);
}

TEST(RadarConfig, DefaultValidates) { EXPECT_TRUE(validate(default_radar_config()).empty()); }

TEST(RadarConfig, ZeroBandwidthRejected) {
  auto cfg = default_radar_config();
  cfg.bandwidth_hz = 0.0;
  EXPECT_TRUE(has_violation(validate(cfg), "bandwidth must be positive"));
  EXPECT_THROW(derive_specs(cfg), std::invalid_argument);
}

TEST(RadarConfig, EmptyTxRejected) {
  auto cfg = default_radar_config();
  cfg.tx_positions.clear();
  EXPECT_FALSE(validate(cfg).empty());
  try {
    derive_specs(cfg);
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("tx"), std::string::npos);
  }
}

TEST(RadarConfig, SweepBeyondBandwidthRejected) {
  auto cfg = default_radar_config();
  cfg.samples_per_chirp = 512;  // 5.06 GHz sampled sweep
  EXPECT_TRUE(has_violation(validate(cfg), "sweep"));
}

TEST(RadarConfig, DoublingBandwidthHalvesResolution) {
  auto cfg = default_radar_config();
  const double r1 = derive_specs(cfg).range_resolution_m;
  cfg.bandwidth_hz *= 2.0;
  EXPECT_EQ(derive_specs(cfg).range_resolution_m, r1 / 2.0);
}

TEST(RadarConfig, DeriveIsPure) {
  const auto cfg = default_radar_config();
  const auto a = derive_specs(cfg);
  const auto b = derive_specs(cfg);
  EXPECT_EQ(a.max_range_m, b.max_range_m);
  EXPECT_EQ(a.range_bin_width_m, b.range_bin_width_m);
}

TEST(RadarConfig, YamlRoundTrip) {
  auto cfg = default_radar_config();
  cfg.noise_power = 3.25e-5;
  cfg.chirps_per_frame = 7;
  const auto back = parse_radar_config(to_yaml(cfg));
  EXPECT_EQ(back.noise_power, cfg.noise_power);
  EXPECT_EQ(back.chirps_per_frame, 7);
  EXPECT_EQ(back.sweep_slope_hz_per_s, cfg.sweep_slope_hz_per_s);
  ASSERT_EQ(back.tx_positions.size(), cfg.tx_positions.size());
  for (std::size_t i = 0; i < cfg.tx_positions.size(); ++i) {
    EXPECT_EQ(back.tx_positions[i].x, cfg.tx_positions[i].x);
    EXPECT_EQ(back.tx_positions[i].z, cfg.tx_positions[i].z);
  }
}

TEST(RadarConfig, PartialYamlKeepsDefaults) {
  const auto cfg = parse_radar_config("bandwidth_hz: 4.0e9\nsweep_slope_hz_per_s: 1.0e14\n");
  EXPECT_EQ(cfg.bandwidth_hz, 4.0e9);
  EXPECT_EQ(cfg.sample_rate_hz, 8e6);
  EXPECT_EQ(cfg.rx_positions.size(), 16u);
}

TEST(RadarConfig, BundledFileMatchesDefaults) {
  const auto cfg = load_radar_config(std::string(MMW_SOURCE_DIR) + "/data/radar_default.yaml");
  const auto d = default_radar_config();
  EXPECT_EQ(cfg.carrier_frequency_hz, d.carrier_frequency_hz);
  EXPECT_EQ(cfg.bandwidth_hz, d.bandwidth_hz);
  EXPECT_EQ(cfg.chirps_per_frame, d.chirps_per_frame);
  EXPECT_EQ(cfg.tx_positions.size(), d.tx_positions.size());
}
