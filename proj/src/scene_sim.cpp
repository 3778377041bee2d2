#include "mmwcarry/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "mmwcarry/rng.hpp"

namespace mmw {

namespace {

struct TemplatePoint {
  double lateral;
  double height;
  double depth;  // toward the radar
  double amplitude;
};

// Torso strongest; heights are for a 1.75 m, 0.5 m wide subject.
constexpr std::array<TemplatePoint, 8> kBody{{
    {0.00, 1.30, 0.00, 1.00},   // torso
    {0.00, 1.65, 0.00, 0.35},   // head
    {-0.20, 1.45, 0.00, 0.40},  // shoulders
    {0.20, 1.45, 0.00, 0.40},
    {-0.12, 0.95, 0.00, 0.45},  // hips
    {0.12, 0.95, 0.00, 0.45},
    {-0.10, 0.50, 0.00, 0.30},  // legs
    {0.10, 0.50, 0.00, 0.30},
}};

struct ObjectTemplate {
  std::vector<TemplatePoint> points;  // amplitude unused
  double amp_lo;
  double amp_hi;
};

// Per-scatterer amplitude bands: laptop > knife > phone.
const std::array<ObjectTemplate, kNumClasses>& object_templates() {
  static const std::array<ObjectTemplate, kNumClasses> t{{
      {{{-0.10, 1.10, 0.18, 0.0}, {0.10, 1.10, 0.18, 0.0}}, 0.55, 0.70},  // laptop
      {{{-0.15, 0.85, 0.10, 0.0}}, 0.15, 0.25},                           // phone
      {{{0.15, 0.95, 0.12, 0.0}}, 0.40, 0.55},                            // knife
  }};
  return t;
}

constexpr ScatterTag tag_for(std::size_t cls) {
  return cls == 0 ? ScatterTag::laptop : cls == 1 ? ScatterTag::phone : ScatterTag::knife;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Vec3 place(Vec2 ground, const TemplatePoint& p, double lat_scale, double height_scale,
           double radar_height) {
  const double r = std::hypot(ground.x, ground.y);
  const double dx = r > 0 ? -ground.x / r : 0.0;
  const double dy = r > 0 ? -ground.y / r : -1.0;
  // lateral axis: toward-radar rotated by -90 degrees
  const double lx = -dy;
  const double ly = dx;
  const double lat = p.lateral * lat_scale;
  return {ground.x + dx * p.depth + lx * lat, ground.y + dy * p.depth + ly * lat,
          p.height * height_scale - radar_height};
}

}  // namespace

Homography Scenario::default_camera_homography() {
  return camera_to_floor_homography(600.0, 640.0, 360.0, 1.5, 20.0);
}

Vec2 subject_position(const SubjectSpec& s, int t, double frame_period_s) {
  if (s.waypoints.empty()) throw std::invalid_argument("subject has no waypoints");
  const auto& wp = s.waypoints;
  if (wp.size() == 1 || s.speed_mps <= 0.0) return {wp.front().x, wp.front().y};

  const double step = s.speed_mps * frame_period_s;  // metres per frame
  // Forward timeline in frames: pause at each waypoint, then travel.
  double forward = 0.0;
  for (std::size_t i = 0; i < wp.size(); ++i) {
    forward += wp[i].pause_frames;
    if (i + 1 < wp.size()) forward += std::hypot(wp[i + 1].x - wp[i].x, wp[i + 1].y - wp[i].y) / step;
  }
  if (forward <= 0.0) return {wp.front().x, wp.front().y};
  double phase = std::fmod(static_cast<double>(t), 2.0 * forward);
  if (phase > forward) phase = 2.0 * forward - phase;

  for (std::size_t i = 0; i < wp.size(); ++i) {
    if (phase <= wp[i].pause_frames) return {wp[i].x, wp[i].y};
    phase -= wp[i].pause_frames;
    if (i + 1 == wp.size()) break;
    const double len = std::hypot(wp[i + 1].x - wp[i].x, wp[i + 1].y - wp[i].y);
    const double seg = len / step;
    if (phase <= seg) {
      const double f = seg > 0 ? phase / seg : 1.0;
      return {wp[i].x + f * (wp[i + 1].x - wp[i].x), wp[i].y + f * (wp[i + 1].y - wp[i].y)};
    }
    phase -= seg;
  }
  return {wp.back().x, wp.back().y};
}

bool ghost_active(const Scenario& scn, int subject, int t) {
  const double rate = scn.multipath_ghost_rate;
  if (rate <= 0.0) return false;
  if (rate >= 1.0) return true;
  const double p_off = 1.0 / std::max(1.0, scn.ghost_episode_frames);
  const double p_on = std::min(1.0, rate / (1.0 - rate) * p_off);
  auto rng = make_rng(scn.rng_seed, "ghost", {static_cast<std::uint64_t>(subject)});
  bool on = uniform01(rng) < rate;
  for (int i = 1; i <= t; ++i) {
    const double u = uniform01(rng);
    on = on ? !(u < p_off) : (u < p_on);
  }
  return on;
}

std::vector<Scatterer> subject_scatterers(const Scenario& scn, int subject, Vec2 ground) {
  const auto& spec = scn.subjects.at(subject);
  const double lat_scale = spec.width_m / 0.5;
  const double height_scale = spec.height_m / 1.75;
  std::vector<Scatterer> out;
  for (const auto& p : kBody) {
    out.push_back({place(ground, p, lat_scale, height_scale, scn.radar_height_m), p.amplitude,
                   ScatterTag::body});
  }
  const auto& objs = object_templates();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!spec.carried[c]) continue;
    auto rng = make_rng(scn.rng_seed, "object-amp",
                        {static_cast<std::uint64_t>(subject), static_cast<std::uint64_t>(c)});
    for (const auto& p : objs[c].points) {
      const double amp = uniform(rng, objs[c].amp_lo, objs[c].amp_hi);
      out.push_back({place(ground, p, lat_scale, height_scale, scn.radar_height_m), amp, tag_for(c)});
    }
  }
  return out;
}

std::vector<Scatterer> scene_scatterers(const Scenario& scn, int t) {
  std::vector<Scatterer> out = scn.clutter;
  for (int i = 0; i < static_cast<int>(scn.subjects.size()); ++i) {
    const Vec2 g = subject_position(scn.subjects[i], t, scn.frame_period_s);
    auto body = subject_scatterers(scn, i, g);
    out.insert(out.end(), body.begin(), body.end());
    if (ghost_active(scn, i, t)) {
      const double wall = g.x >= 0.0 ? scn.wall_x_m : -scn.wall_x_m;
      // torso, head and hips reflected off the nearer side wall
      for (int k : {0, 1, 4, 5}) {
        Scatterer s = body[k];
        s.position.x = 2.0 * wall - s.position.x;
        s.amplitude *= 0.5;
        s.tag = ScatterTag::ghost;
        out.push_back(s);
      }
    }
  }
  return out;
}

SynthResult synth_if_scatterers(const std::vector<Scatterer>& scatterers, const RadarConfig& cfg,
                                std::uint64_t seed, int frame) {
  const DerivedSpecs spec = derive_specs(cfg);
  const int ns = cfg.samples_per_chirp;
  const int nc = cfg.chirps_per_frame;
  const int nt = static_cast<int>(cfg.tx_positions.size());
  const int nr = static_cast<int>(cfg.rx_positions.size());
  const double lambda = cfg.wavelength_m();

  SynthResult res{IFCube4D(ns, nc, nt, nr), 0};

  // Noiseless per-stream samples; identical for every chirp (no Doppler).
  std::vector<std::complex<double>> clean(static_cast<std::size_t>(nt) * nr * ns);
  std::vector<std::complex<double>> tone(ns);
  for (const auto& sc : scatterers) {
    const double r = std::sqrt(sc.position.x * sc.position.x + sc.position.y * sc.position.y +
                               sc.position.z * sc.position.z);
    if (!(r > 0.0) || r >= spec.max_range_m) {
      ++res.dropped_scatterers;
      continue;
    }
    if (sc.amplitude == 0.0) continue;
    const double az = std::atan2(sc.position.x, sc.position.y);
    const double el = std::asin(std::clamp(sc.position.z / r, -1.0, 1.0));
    const double f_if = 2.0 * r * cfg.sweep_slope_hz_per_s / kSpeedOfLight;
    const double carrier_phase = 4.0 * kPi * r / lambda;
    for (int n = 0; n < ns; ++n) {
      tone[n] = std::polar(1.0, 2.0 * kPi * f_if * n / cfg.sample_rate_hz + carrier_phase);
    }
    const double amp = sc.amplitude / (r * r);
    const double ux = std::sin(az) * std::cos(el);
    const double uz = std::sin(el);
    for (int t = 0; t < nt; ++t) {
      for (int rr = 0; rr < nr; ++rr) {
        const double xv = cfg.tx_positions[t].x + cfg.rx_positions[rr].x;
        const double zv = cfg.tx_positions[t].z + cfg.rx_positions[rr].z;
        const std::complex<double> w = std::polar(amp, 2.0 * kPi * (xv * ux + zv * uz));
        auto* dst = &clean[(static_cast<std::size_t>(t) * nr + rr) * ns];
        for (int n = 0; n < ns; ++n) dst[n] += w * tone[n];
      }
    }
  }

  const double sigma = std::sqrt(cfg.noise_power / 2.0);
  auto& cube = res.cube;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    auto rng = make_rng(seed, "if-noise", {static_cast<std::uint64_t>(frame), static_cast<std::uint64_t>(c)});
    for (int n = 0; n < ns; ++n) {
      for (int t = 0; t < nt; ++t) {
        for (int rr = 0; rr < nr; ++rr) {
          std::complex<double> v = clean[(static_cast<std::size_t>(t) * nr + rr) * ns + n];
          if (sigma > 0.0) {
            const auto [a, b] = gaussian_pair(rng);
            v += std::complex<double>(sigma * a, sigma * b);
          }
          cube(n, c, t, rr) = std::complex<float>(v);
        }
      }
    }
  }
  return res;
}

SynthResult synth_if_frame(const Scenario& scn, int t, const RadarConfig& cfg) {
  if (t < 0 || t >= scn.duration) {
    throw std::out_of_range("frame " + std::to_string(t) + " outside scenario duration " +
                            std::to_string(scn.duration));
  }
  return synth_if_scatterers(scene_scatterers(scn, t), cfg, scn.rng_seed, t);
}

Detection ground_truth_box(const Scenario& scn, int subject, int t) {
  const auto& spec = scn.subjects.at(subject);
  const Vec2 g = subject_position(spec, t, scn.frame_period_s);
  const Homography inv = scn.true_homography.inverse();
  const Vec2 foot = project(inv, g.x, g.y);
  const Vec2 left = project(inv, g.x - 0.5 * spec.width_m, g.y);
  const Vec2 right = project(inv, g.x + 0.5 * spec.width_m, g.y);
  const double w = std::abs(right.x - left.x);
  const double l = w * spec.height_m / spec.width_m;
  return {foot.x, foot.y - 0.5 * l, w, l, 1.0};
}

bool box_visible(const Scenario& scn, const Detection& b) {
  return b.w > 0 && b.l > 0 && b.left() >= 0.0 && b.top() >= 0.0 && b.right() <= scn.image_width &&
         b.bottom() <= scn.image_height;
}

std::vector<Detection> synth_camera_detections(const Scenario& scn, int t) {
  if (t < 0 || t >= scn.duration) {
    throw std::out_of_range("frame " + std::to_string(t) + " outside scenario duration");
  }
  const auto& noise = scn.camera_noise;
  auto rng = make_rng(scn.rng_seed, "camera", {static_cast<std::uint64_t>(t)});
  std::vector<Detection> out;
  for (int i = 0; i < static_cast<int>(scn.subjects.size()); ++i) {
    Detection box = ground_truth_box(scn, i, t);
    // Fixed draw count per subject keeps the stream aligned across settings.
    const double u_miss = uniform01(rng);
    const auto [j0, j1] = gaussian_pair(rng);
    const auto [j2, j3] = gaussian_pair(rng);
    const double conf = uniform(rng, 0.6, 1.0);
    if (!box_visible(scn, box) || u_miss < noise.miss_prob) continue;
    box.u += noise.center_jitter_px * j0;
    box.v += noise.center_jitter_px * j1;
    box.w = std::max(1.0, box.w + noise.size_jitter_px * j2);
    box.l = std::max(1.0, box.l + noise.size_jitter_px * j3);
    box.confidence = 1.0 - conf + 0.6;  // (0.6, 1.0]
    out.push_back(box);
  }
  if (uniform01(rng) < noise.false_box_rate) {
    // Reflection on the floor: a flat box at a random floor location.
    const double fx = uniform(rng, -2.0, 2.0);
    const double fy = uniform(rng, 2.5, 10.0);
    const Homography inv = scn.true_homography.inverse();
    const Vec2 foot = project(inv, fx, fy);
    const Vec2 left = project(inv, fx - 0.3, fy);
    const Vec2 right = project(inv, fx + 0.3, fy);
    const double w = std::abs(right.x - left.x);
    const double l = 0.3 * w;
    Detection fb{foot.x, foot.y - 0.5 * l, w, l, uniform(rng, 0.05, 0.5)};
    if (box_visible(scn, fb)) out.push_back(fb);
  }
  return out;
}

std::vector<GroundTruthEntry> ground_truth(const Scenario& scn, int t) {
  std::vector<GroundTruthEntry> out;
  for (int i = 0; i < static_cast<int>(scn.subjects.size()); ++i) {
    out.push_back({i, subject_position(scn.subjects[i], t, scn.frame_period_s), scn.subjects[i].carried});
  }
  return out;
}

void validate(const Scenario& scn) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (scn.duration < 1) throw std::invalid_argument("scenario duration must be >= 1");
  if (!prob(scn.multipath_ghost_rate)) throw std::invalid_argument("multipath_ghost_rate must be in [0,1]");
  if (!prob(scn.camera_noise.miss_prob)) throw std::invalid_argument("miss_prob must be in [0,1]");
  if (!prob(scn.camera_noise.false_box_rate)) throw std::invalid_argument("false_box_rate must be in [0,1]");
  if (scn.camera_noise.center_jitter_px < 0 || scn.camera_noise.size_jitter_px < 0) {
    throw std::invalid_argument("camera jitter must be non-negative");
  }
  if (!(scn.frame_period_s > 0)) throw std::invalid_argument("frame period must be positive");
  for (const auto& s : scn.subjects) {
    if (s.waypoints.empty()) throw std::invalid_argument("subject needs at least one waypoint");
    if (s.speed_mps < 0) throw std::invalid_argument("subject speed must be non-negative");
    if (!(s.height_m > 0) || !(s.width_m > 0)) throw std::invalid_argument("subject size must be positive");
    for (const auto& w : s.waypoints) {
      if (std::abs(w.x) > scn.wall_x_m || w.y <= 0.0 || w.y > scn.hall_depth_m || w.pause_frames < 0) {
        throw std::invalid_argument("waypoint outside hall bounds");
      }
    }
  }
  for (const auto& c : scn.clutter) {
    if (c.amplitude < 0) throw std::invalid_argument("scatterer amplitude must be non-negative");
    if (std::abs(c.position.x) > scn.wall_x_m || c.position.y <= 0.0 || c.position.y > scn.hall_depth_m) {
      throw std::invalid_argument("clutter scatterer outside hall bounds");
    }
  }
}

Scenario parse_scenario(const std::string& text) {
  const YAML::Node root = YAML::Load(text);
  if (!root.IsMap()) throw std::invalid_argument("scenario must be a key-value map");
  Scenario scn;
  auto get = [&](const YAML::Node& n, const char* key, auto& dst) {
    if (const auto v = n[key]) dst = v.as<std::decay_t<decltype(dst)>>();
  };
  get(root, "duration", scn.duration);
  get(root, "rng_seed", scn.rng_seed);
  get(root, "multipath_ghost_rate", scn.multipath_ghost_rate);
  get(root, "ghost_episode_frames", scn.ghost_episode_frames);
  get(root, "frame_period_s", scn.frame_period_s);
  get(root, "radar_height_m", scn.radar_height_m);
  get(root, "wall_x_m", scn.wall_x_m);
  get(root, "hall_depth_m", scn.hall_depth_m);
  get(root, "image_width", scn.image_width);
  get(root, "image_height", scn.image_height);
  if (const auto cn = root["camera_noise"]) {
    get(cn, "miss_prob", scn.camera_noise.miss_prob);
    get(cn, "false_box_rate", scn.camera_noise.false_box_rate);
    get(cn, "center_jitter_px", scn.camera_noise.center_jitter_px);
    get(cn, "size_jitter_px", scn.camera_noise.size_jitter_px);
  }
  if (const auto h = root["true_homography"]) {
    if (!h.IsSequence() || h.size() != 9) throw std::invalid_argument("true_homography needs 9 numbers");
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = h[i].as<double>();
    scn.true_homography = Homography(m);
  }
  if (const auto cl = root["clutter"]) {
    for (const auto& c : cl) {
      const auto p = c["position"];
      if (!p || p.size() != 3) throw std::invalid_argument("clutter position needs [x, y, z]");
      scn.clutter.push_back({{p[0].as<double>(), p[1].as<double>(), p[2].as<double>()},
                             c["amplitude"].as<double>(), ScatterTag::clutter});
    }
  }
  if (const auto subs = root["subjects"]) {
    for (const auto& s : subs) {
      SubjectSpec spec;
      get(s, "speed_mps", spec.speed_mps);
      get(s, "height_m", spec.height_m);
      get(s, "width_m", spec.width_m);
      for (const auto& w : s["waypoints"]) {
        if (w.size() < 2 || w.size() > 3) throw std::invalid_argument("waypoint needs [x, y] or [x, y, pause]");
        spec.waypoints.push_back({w[0].as<double>(), w[1].as<double>(), w.size() == 3 ? w[2].as<int>() : 0});
      }
      if (const auto carry = s["carry"]) {
        for (const auto& c : carry) {
          const auto name = c.as<std::string>();
          const auto it = std::find(kClassNames.begin(), kClassNames.end(), name);
          if (it == kClassNames.end()) throw std::invalid_argument("unknown carried class: " + name);
          spec.carried[static_cast<std::size_t>(it - kClassNames.begin())] = true;
        }
      }
      scn.subjects.push_back(std::move(spec));
    }
  }
  validate(scn);
  return scn;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("malformed scenario " + path.string() + ": " + e.what());
  }
}

}  // namespace mmw
