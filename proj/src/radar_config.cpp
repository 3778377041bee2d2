#include "mmwcarry/radar_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "mmwcarry/types.hpp"

namespace mmw {

namespace {

// The default waveform rounds the sweep bandwidth (S * N_s / f_s = 2.528 GHz against a
// nominal 2.5 GHz), so the sampled-sweep check carries a small slack.
constexpr double kSweepSlack = 1.02;

std::vector<AntennaPosition> parse_positions(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) {
    throw std::invalid_argument(key + " must be a list of [x, z] pairs");
  }
  std::vector<AntennaPosition> out;
  for (const auto& item : node) {
    if (!item.IsSequence() || item.size() != 2) {
      throw std::invalid_argument(key + " entries must be [x, z] pairs");
    }
    out.push_back({item[0].as<double>(), item[1].as<double>()});
  }
  return out;
}

template <typename T>
void read_key(const YAML::Node& root, const char* key, T& dst) {
  if (const auto n = root[key]) {
    dst = n.as<T>();
  }
}

}  // namespace

double RadarConfig::wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

std::vector<AntennaPosition> default_rx_positions() {
  std::vector<AntennaPosition> rx;
  for (int i = 0; i < 16; ++i) {
    rx.push_back({0.5 * i, 0.0});
  }
  return rx;
}

std::vector<AntennaPosition> default_tx_positions() {
  std::vector<AntennaPosition> tx;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 4; ++col) {
      tx.push_back({8.0 * col, 1.0 * row});
    }
  }
  return tx;
}

RadarConfig default_radar_config() {
  RadarConfig cfg;
  cfg.tx_positions = default_tx_positions();
  cfg.rx_positions = default_rx_positions();
  return cfg;
}

std::vector<std::string> validate(const RadarConfig& cfg) {
  std::vector<std::string> v;
  auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!finite_pos(cfg.carrier_frequency_hz)) v.emplace_back("carrier frequency must be positive");
  if (!finite_pos(cfg.bandwidth_hz)) v.emplace_back("bandwidth must be positive");
  if (!finite_pos(cfg.sweep_slope_hz_per_s)) v.emplace_back("sweep slope must be positive");
  if (!finite_pos(cfg.sample_rate_hz)) v.emplace_back("sample rate must be positive");
  if (cfg.chirps_per_frame < 1) v.emplace_back("chirps per frame must be at least 1");
  if (cfg.samples_per_chirp < 1) v.emplace_back("samples per chirp must be at least 1");
  if (cfg.tx_positions.empty()) v.emplace_back("tx positions must be non-empty");
  if (cfg.rx_positions.empty()) v.emplace_back("rx positions must be non-empty");
  if (!(cfg.noise_power >= 0.0) || !std::isfinite(cfg.noise_power)) {
    v.emplace_back("noise power must be non-negative");
  }
  if (cfg.azimuth_fft_size < 1) v.emplace_back("azimuth fft size must be at least 1");
  if (cfg.elevation_fft_size < 1) v.emplace_back("elevation fft size must be at least 1");
  if (finite_pos(cfg.bandwidth_hz) && finite_pos(cfg.sweep_slope_hz_per_s) &&
      finite_pos(cfg.sample_rate_hz) && cfg.samples_per_chirp >= 1) {
    const double swept = cfg.sweep_slope_hz_per_s * cfg.samples_per_chirp / cfg.sample_rate_hz;
    if (swept > cfg.bandwidth_hz * kSweepSlack) {
      v.emplace_back("sampled sweep exceeds bandwidth");
    }
  }
  return v;
}

DerivedSpecs derive_specs(const RadarConfig& cfg) {
  if (const auto violations = validate(cfg); !violations.empty()) {
    std::string msg = "invalid radar config:";
    for (const auto& s : violations) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }
  DerivedSpecs d;
  d.range_resolution_m = kSpeedOfLight / (2.0 * cfg.bandwidth_hz);
  d.max_range_m = cfg.sample_rate_hz * kSpeedOfLight / (2.0 * cfg.sweep_slope_hz_per_s);
  d.n_virtual = static_cast<int>(cfg.tx_positions.size() * cfg.rx_positions.size());
  d.range_bin_width_m = d.max_range_m / cfg.samples_per_chirp;
  d.azimuth_bins = cfg.azimuth_fft_size;
  d.elevation_bins = cfg.elevation_fft_size;
  return d;
}

RadarConfig parse_radar_config(const std::string& text) {
  const YAML::Node root = YAML::Load(text);
  RadarConfig cfg = default_radar_config();
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw std::invalid_argument("radar config must be a key-value map");
  read_key(root, "carrier_frequency_hz", cfg.carrier_frequency_hz);
  read_key(root, "bandwidth_hz", cfg.bandwidth_hz);
  read_key(root, "sweep_slope_hz_per_s", cfg.sweep_slope_hz_per_s);
  read_key(root, "sample_rate_hz", cfg.sample_rate_hz);
  read_key(root, "chirps_per_frame", cfg.chirps_per_frame);
  read_key(root, "samples_per_chirp", cfg.samples_per_chirp);
  read_key(root, "chirp_duration_s", cfg.chirp_duration_s);
  read_key(root, "frame_duration_s", cfg.frame_duration_s);
  read_key(root, "noise_power", cfg.noise_power);
  read_key(root, "azimuth_fft_size", cfg.azimuth_fft_size);
  read_key(root, "elevation_fft_size", cfg.elevation_fft_size);
  if (const auto n = root["tx_positions"]) cfg.tx_positions = parse_positions(n, "tx_positions");
  if (const auto n = root["rx_positions"]) cfg.rx_positions = parse_positions(n, "rx_positions");
  return cfg;
}

RadarConfig load_radar_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open radar config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_radar_config(ss.str());
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("malformed radar config " + path.string() + ": " + e.what());
  }
}

std::string to_yaml(const RadarConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "carrier_frequency_hz" << YAML::Value << cfg.carrier_frequency_hz;
  out << YAML::Key << "bandwidth_hz" << YAML::Value << cfg.bandwidth_hz;
  out << YAML::Key << "sweep_slope_hz_per_s" << YAML::Value << cfg.sweep_slope_hz_per_s;
  out << YAML::Key << "sample_rate_hz" << YAML::Value << cfg.sample_rate_hz;
  out << YAML::Key << "chirps_per_frame" << YAML::Value << cfg.chirps_per_frame;
  out << YAML::Key << "samples_per_chirp" << YAML::Value << cfg.samples_per_chirp;
  out << YAML::Key << "chirp_duration_s" << YAML::Value << cfg.chirp_duration_s;
  out << YAML::Key << "frame_duration_s" << YAML::Value << cfg.frame_duration_s;
  out << YAML::Key << "noise_power" << YAML::Value << cfg.noise_power;
  out << YAML::Key << "azimuth_fft_size" << YAML::Value << cfg.azimuth_fft_size;
  out << YAML::Key << "elevation_fft_size" << YAML::Value << cfg.elevation_fft_size;
  for (const auto* key : {"tx_positions", "rx_positions"}) {
    const auto& pos = std::string(key) == "tx_positions" ? cfg.tx_positions : cfg.rx_positions;
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& p : pos) out << YAML::Flow << YAML::BeginSeq << p.x << p.z << YAML::EndSeq;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mmw
