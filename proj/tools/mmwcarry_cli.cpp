// mmwcarry: batch driver for the simulate / image / track / calibrate / fuse /
// evaluate chain. Exit codes: 0 success, 1 configuration error, 2 stage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "mmwcarry/cube_io.hpp"
#include "mmwcarry/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mmw;

namespace {

void require_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw ConfigError(fmt::format("{} not found: {}", what, p.string()));
}

RadarConfig radar_from(const std::string& path) {
  if (path.empty()) return default_radar_config();
  require_file(path, "radar config file");
  try {
    auto cfg = load_radar_config(path);
    derive_specs(cfg);
    return cfg;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Scenario scenario_from(const std::string& path, std::optional<std::uint64_t> seed) {
  require_file(path, "scenario file");
  Scenario scn;
  try {
    scn = load_scenario(path);
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (seed) scn.rng_seed = *seed;
  return scn;
}

Homography homography_from(const std::string& calibration, const std::string& scenario) {
  if (!calibration.empty()) {
    require_file(calibration, "calibration file");
    try {
      return estimate_homography(load_correspondences(calibration));
    } catch (const std::exception& e) {
      throw ConfigError(calibration + ": " + e.what());
    }
  }
  if (!scenario.empty()) return scenario_from(scenario, std::nullopt).true_homography;
  return Scenario::default_camera_homography();
}

int frame_count(const fs::path& dir, int requested) {
  if (requested > 0) return requested;
  int last = -1;
  if (fs::exists(dir / "ground_truth.csv")) {
    for (const auto& r : read_ground_truth(dir / "ground_truth.csv")) last = std::max(last, r.frame);
  }
  if (fs::exists(dir / "camera_detections.csv")) {
    for (const auto& r : read_camera_detections(dir / "camera_detections.csv")) last = std::max(last, r.frame);
  }
  return last + 1;
}

// A cube file, a directory of cubes, or a run directory holding if_cubes/.
std::vector<fs::path> cube_files(const fs::path& in) {
  if (!fs::is_directory(in)) return {in};
  const fs::path dir = fs::is_directory(in / "if_cubes") ? in / "if_cubes" : in;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".mmwc") files.push_back(e.path());
  }
  if (files.empty()) throw ConfigError("no .mmwc cubes in " + dir.string());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmwcarry: simulated mmWave carried-object screening pipeline"};
  app.require_subcommand(1);

  std::string scenario, radar_path, calibration, out = "out", in, classifier = "oracle", fusion = "knwltrf";
  std::optional<std::uint64_t> seed;
  double p_thr = 0.5;
  int frames = -1;
  bool dump = false;

  auto* sim = app.add_subcommand("simulate", "synthesize camera detections, ground truth and (with --dump) IF cubes");
  sim->add_option("--scenario", scenario, "scenario YAML")->required();
  sim->add_option("--radar", radar_path, "radar config YAML (default: built-in 77 GHz config)");
  sim->add_option("--seed", seed, "root seed (overrides the scenario)");
  sim->add_option("--frames", frames, "frame limit");
  sim->add_option("--out", out, "output directory");
  sim->add_flag("--dump", dump, "also write IF cubes");

  auto* img = app.add_subcommand("image", "3D-image dumped IF cubes");
  img->add_option("--in", in, "IF cube file or directory")->required();
  img->add_option("--radar", radar_path, "radar config YAML");
  img->add_option("--out", out, "output directory");

  auto* trk = app.add_subcommand("track", "camera and radar-only tracking from dumped detections");
  trk->add_option("--in", in, "directory with camera_detections.csv")->required();
  trk->add_option("--scenario", scenario, "scenario YAML (for its true homography)");
  trk->add_option("--calibration", calibration, "\"u v x y\" correspondences");
  trk->add_option("--frames", frames, "number of frames");
  trk->add_option("--out", out, "output directory");

  auto* cal = app.add_subcommand("calibrate", "estimate the homography and report leave-one-out errors");
  cal->add_option("--points", calibration, "\"u v x y\" correspondences")->required();
  cal->add_option("--out", out, "output directory");

  auto* fus = app.add_subcommand("fuse", "fuse a prediction log over time");
  fus->add_option("--in", in, "directory with predictions.csv and localization.csv")->required();
  fus->add_option("--fusion", fusion, "knwltrf | vote | single");
  fus->add_option("--p-thr", p_thr, "decision threshold");
  fus->add_option("--radar", radar_path, "radar config YAML (range bin width)");
  fus->add_option("--out", out, "output directory");

  auto* evl = app.add_subcommand("evaluate", "detection and tracking metrics of a run directory");
  evl->add_option("--in", in, "run directory")->required();
  evl->add_option("--p-thr", p_thr, "decision threshold");
  evl->add_option("--out", out, "output directory");

  auto* run = app.add_subcommand("run", "full pipeline");
  run->add_option("--scenario", scenario, "scenario YAML")->required();
  run->add_option("--radar", radar_path, "radar config YAML");
  run->add_option("--calibration", calibration, "\"u v x y\" correspondences (default: true homography)");
  run->add_option("--classifier", classifier, "energy | oracle");
  run->add_option("--fusion", fusion, "knwltrf | vote | single");
  run->add_option("--seed", seed, "root seed (overrides the scenario)");
  run->add_option("--p-thr", p_thr, "decision threshold");
  run->add_option("--frames", frames, "frame limit");
  run->add_option("--out", out, "output directory");
  run->add_flag("--dump", dump, "write IF and radar cubes per frame");

  std::vector<int> lengths{1, 10, 30, 60, 100, 150};
  int scenarios = 20;
  auto* swp = app.add_subcommand("sweep-length", "fused metrics against trajectory length");
  swp->add_option("--in", in, "run directory (default: oracle study on generated scenarios)");
  swp->add_option("--lengths", lengths, "lengths")->delimiter(',');
  swp->add_option("--scenarios", scenarios, "generated scenarios for the oracle study");
  swp->add_option("--seed", seed, "study seed");
  swp->add_option("--p-thr", p_thr, "decision threshold");
  swp->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const fs::path outdir(out);
    if (*sim) {
      const auto scn = scenario_from(scenario, seed);
      const auto cfg = radar_from(radar_path);
      const int n = frames > 0 ? std::min(frames, scn.duration) : scn.duration;
      std::vector<CameraDetectionRow> cams;
      std::vector<GroundTruthRow> gt;
      for (int t = 0; t < n; ++t) {
        try {
          for (const auto& d : synth_camera_detections(scn, t)) cams.push_back({t, d});
          for (const auto& g : ground_truth(scn, t)) gt.push_back({t, g});
          if (dump) {
            const auto s = synth_if_frame(scn, t, cfg);
            if (s.dropped_scatterers > 0)
              fmt::print(stderr, "warning: frame {}: {} scatterers beyond max range dropped\n", t,
                         s.dropped_scatterers);
            write_if_cube(outdir / "if_cubes" / fmt::format("frame_{:05d}.mmwc", t), s.cube);
          }
        } catch (const std::exception& e) {
          throw StageError("simulate", t, e.what());
        }
      }
      write_camera_detections(outdir / "camera_detections.csv", cams);
      write_ground_truth(outdir / "ground_truth.csv", gt);
      fmt::print("simulated {} frames into {}\n", n, outdir.string());
    } else if (*img) {
      require_file(in, "IF cube input");
      const auto cfg = radar_from(radar_path);
      const auto va = form_virtual_array(cfg.tx_positions, cfg.rx_positions);
      int frame = 0;
      for (const auto& f : cube_files(in)) {
        try {
          const auto cube = image_3d(read_if_cube(f), va, cfg);
          write_radar_cube(outdir / "radar_cubes" / f.filename(), cube);
          const auto& d = cube.data();
          const auto it = std::max_element(d.begin(), d.end());
          const auto idx = static_cast<std::size_t>(it - d.begin());
          const int r = static_cast<int>(idx / (static_cast<std::size_t>(cube.azimuth_bins()) * cube.elevation_bins()));
          const int a = static_cast<int>(idx / cube.elevation_bins() % cube.azimuth_bins());
          fmt::print("{}: peak range bin {} ({:.3f} m), azimuth bin {} ({:.2f} deg)\n", f.filename().string(), r,
                     cube.range_m(r), a, cube.azimuth_deg(a));
        } catch (const std::exception& e) {
          throw StageError("image", frame, e.what());
        }
        ++frame;
      }
    } else if (*trk) {
      const fs::path dir(in);
      require_file(dir / "camera_detections.csv", "camera detections");
      const auto h = homography_from(calibration, scenario);
      const int n = frame_count(dir, frames);
      const auto cam = track_camera(read_camera_detections(dir / "camera_detections.csv"), n, TrackerParams{}, h);
      write_tracklet_log(outdir / "tracklet_log.csv", cam.log);
      write_track_instances(outdir / "camera_tracks.csv", cam.instances);
      if (fs::exists(dir / "radar_detections.csv")) {
        const auto rad = track_radar(read_radar_detections(dir / "radar_detections.csv"), n,
                                     radar_tracker_params(), PipelineRunConfig{}.radar_box_m);
        write_tracklet_log(outdir / "radar_tracklet_log.csv", rad.log);
        write_track_instances(outdir / "radar_tracks.csv", rad.instances);
      }
      fmt::print("tracked {} frames\n", n);
    } else if (*cal) {
      require_file(calibration, "calibration file");
      const auto pts = load_correspondences(calibration);
      Homography h;
      try {
        h = estimate_homography(pts);
      } catch (const std::exception& e) {
        throw ConfigError(calibration + ": " + e.what());
      }
      std::string report = fmt::format("points: {}\nhomography (camera -> radar plane):\n", pts.size());
      for (int r = 0; r < 3; ++r)
        report += fmt::format("  {} {} {}\n", fmt_real(h.matrix()(r, 0)), fmt_real(h.matrix()(r, 1)),
                              fmt_real(h.matrix()(r, 2)));
      if (pts.size() >= 5) {
        const auto errs = leave_one_out_errors(pts);
        report += "leave-one-out error (m):\n";
        for (std::size_t i = 0; i < errs.size(); ++i) report += fmt::format("  {:>3} {:.4f}\n", i, errs[i]);
        report += fmt::format("mean {:.4f} m\n", std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size());
      }
      fmt::print("{}", report);
      write_text(outdir / "calibration.txt", report);
    } else if (*fus) {
      const fs::path dir(in);
      require_file(dir / "predictions.csv", "prediction log");
      require_file(dir / "localization.csv", "localization log");
      FusionConfig fc;
      fc.range_bin_width_m = derive_specs(radar_from(radar_path)).range_bin_width_m;
      fc.p_thr = p_thr;
      const auto fused = fuse_predictions(read_predictions(dir / "predictions.csv"),
                                          read_localization(dir / "localization.csv"), parse_fusion(fusion), fc);
      write_fused_log(outdir / "fused_log.csv", fused);
      fmt::print("fused {} rows\n", fused.size());
    } else if (*evl) {
      const fs::path dir(in);
      for (const char* f : {"predictions.csv", "labels.csv", "fused_log.csv", "camera_tracks.csv", "radar_tracks.csv",
                            "ground_truth.csv"})
        require_file(dir / f, "evaluation input");
      const auto rep = evaluate(load_evaluation_inputs(dir), p_thr, PipelineRunConfig{}.match_radius_m);
      write_metrics(outdir / "metrics.csv", rep.rows);
      write_text(outdir / "metrics.txt", rep.table);
      fmt::print("{}", rep.table);
    } else if (*run) {
      PipelineRunConfig cfg;
      cfg.scenario_path = scenario;
      cfg.radar_config_path = radar_path;
      cfg.calibration_path = calibration;
      cfg.classifier = parse_classifier(classifier);
      cfg.fusion = parse_fusion(fusion);
      cfg.out_dir = outdir;
      cfg.seed = seed;
      cfg.p_thr = p_thr;
      cfg.frames = frames;
      cfg.dump = dump;
      const auto res = run_pipeline(cfg);
      fmt::print("{} frames, classifier {}, fusion {}\n\n{}", res.frames, classifier, fusion, res.report.table);
    } else if (*swp) {
      std::string text;
      if (!in.empty()) {
        const fs::path dir(in);
        require_file(dir / "fused_log.csv", "fused log");
        require_file(dir / "labels.csv", "label log");
        const auto tj = fused_trajectories(read_fused_log(dir / "fused_log.csv"), read_labels(dir / "labels.csv"));
        text = format_sweep_table(length_sweep(tj, lengths), "fused decisions against tracking length");
      } else {
        LengthStudyConfig sc;
        sc.scenarios = scenarios;
        sc.lengths = lengths;
        sc.scenario.duration = *std::max_element(lengths.begin(), lengths.end());
        if (seed) sc.seed = *seed;
        sc.fusion.p_thr = p_thr;
        const auto res = length_study(sc);
        text = fmt::format("oracle study: {} scenarios, single-frame accuracy {:.4f}\n\n", scenarios,
                           res.single_frame_accuracy);
        text += format_sweep_table(res.knwltrf, "knwltrf") + "\n";
        text += format_sweep_table(res.vote, "resVoteShort");
      }
      fmt::print("{}", text);
      write_text(outdir / "sweep_length.txt", text);
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 1;
  } catch (const StageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
