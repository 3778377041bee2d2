#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmwcarry/homography.hpp"
#include "mmwcarry/radar_config.hpp"
#include "mmwcarry/types.hpp"

namespace mmw {

enum class ScatterTag { body, laptop, phone, knife, clutter, ghost };

/// Point reflector in radar coordinates: x lateral, y boresight, z height
/// relative to the radar phase center (m).
struct Scatterer {
  Vec3 position;
  double amplitude = 0.0;
  ScatterTag tag = ScatterTag::body;
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  int pause_frames = 0;
};

struct SubjectSpec {
  std::vector<Waypoint> waypoints;
  double speed_mps = 1.0;
  ClassFlags carried{};
  double height_m = 1.75;
  double width_m = 0.5;
};

struct CameraNoise {
  double miss_prob = 0.0;
  double false_box_rate = 0.0;
  double center_jitter_px = 0.0;
  double size_jitter_px = 0.0;
};

struct Scenario {
  std::vector<SubjectSpec> subjects;
  std::vector<Scatterer> clutter;
  double multipath_ghost_rate = 0.0;
  /// Mean length of a multipath ghost episode (frames).
  double ghost_episode_frames = 30.0;
  int duration = 1;
  std::uint64_t rng_seed = 0;
  CameraNoise camera_noise;
  Homography true_homography = default_camera_homography();
  double frame_period_s = 1.0 / 30.0;
  double radar_height_m = 1.0;
  /// Side walls at x = +/- wall_x_m; ghosts mirror about the nearer one.
  double wall_x_m = 3.5;
  double hall_depth_m = 14.0;
  int image_width = 1280;
  int image_height = 720;

  static Homography default_camera_homography();
};

/// Complex IF samples indexed [fast_time][slow_time][tx][rx], stored row-major
/// in that order.
class IFCube4D {
 public:
  IFCube4D() = default;
  IFCube4D(int n_samples, int n_chirps, int n_tx, int n_rx)
      : ns_(n_samples), nc_(n_chirps), nt_(n_tx), nr_(n_rx),
        data_(static_cast<std::size_t>(n_samples) * n_chirps * n_tx * n_rx) {}

  int samples() const { return ns_; }
  int chirps() const { return nc_; }
  int tx() const { return nt_; }
  int rx() const { return nr_; }

  std::size_t index(int s, int c, int t, int r) const {
    return ((static_cast<std::size_t>(s) * nc_ + c) * nt_ + t) * nr_ + r;
  }
  std::complex<float>& operator()(int s, int c, int t, int r) { return data_[index(s, c, t, r)]; }
  const std::complex<float>& operator()(int s, int c, int t, int r) const {
    return data_[index(s, c, t, r)];
  }
  std::vector<std::complex<float>>& data() { return data_; }
  const std::vector<std::complex<float>>& data() const { return data_; }

 private:
  int ns_ = 0, nc_ = 0, nt_ = 0, nr_ = 0;
  std::vector<std::complex<float>> data_;
};

struct SynthResult {
  IFCube4D cube;
  /// Scatterers beyond max range, dropped instead of aliasing.
  int dropped_scatterers = 0;
};

struct GroundTruthEntry {
  int subject_id = 0;
  Vec2 position;
  ClassFlags carried{};
};

/// Scatterers present at frame t (bodies, carried objects, clutter, ghosts).
std::vector<Scatterer> scene_scatterers(const Scenario& scn, int t);

/// IF cube for a single list of scatterers; noise is seeded by (seed, frame).
SynthResult synth_if_scatterers(const std::vector<Scatterer>& scatterers, const RadarConfig& cfg,
                                std::uint64_t seed, int frame);

/// Throws std::out_of_range when t is outside [0, duration).
SynthResult synth_if_frame(const Scenario& scn, int t, const RadarConfig& cfg);

std::vector<Detection> synth_camera_detections(const Scenario& scn, int t);

/// Noiseless camera box of subject `i` at frame t.
Detection ground_truth_box(const Scenario& scn, int subject, int t);
bool box_visible(const Scenario& scn, const Detection& box);

std::vector<GroundTruthEntry> ground_truth(const Scenario& scn, int t);

/// Subject ground position at frame t: piecewise-linear walk through the
/// waypoints (pausing where requested), then back along the same path.
Vec2 subject_position(const SubjectSpec& s, int t, double frame_period_s);

/// Whether subject i has a multipath ghost at frame t (two-state Markov chain
/// with on-fraction equal to multipath_ghost_rate).
bool ghost_active(const Scenario& scn, int subject, int t);

/// Body template plus carried objects for one subject at a ground position.
std::vector<Scatterer> subject_scatterers(const Scenario& scn, int subject, Vec2 ground);

void validate(const Scenario& scn);
Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace mmw
