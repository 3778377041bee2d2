#include "mmwcarry/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "mmwcarry/cube_io.hpp"
#include "mmwcarry/imaging.hpp"
#include "mmwcarry/rng.hpp"

namespace mmw {

namespace fs = std::filesystem;

ClassifierChoice parse_classifier(const std::string& s) {
  if (s == "energy") return ClassifierChoice::energy;
  if (s == "oracle") return ClassifierChoice::oracle;
  throw ConfigError("unknown classifier '" + s + "' (expected energy or oracle)");
}

FusionChoice parse_fusion(const std::string& s) {
  if (s == "knwltrf") return FusionChoice::knwltrf;
  if (s == "vote") return FusionChoice::vote;
  if (s == "single") return FusionChoice::single;
  throw ConfigError("unknown fusion '" + s + "' (expected knwltrf, vote or single)");
}

const char* to_string(ClassifierChoice c) { return c == ClassifierChoice::energy ? "energy" : "oracle"; }

const char* to_string(FusionChoice f) {
  switch (f) {
    case FusionChoice::knwltrf: return "knwltrf";
    case FusionChoice::vote: return "vote";
    case FusionChoice::single: return "single";
  }
  return "?";
}

StageError::StageError(std::string stage_name, int frame_index, const std::string& what)
    : std::runtime_error(fmt::format("stage {} failed at frame {}: {}", stage_name, frame_index, what)),
      stage(std::move(stage_name)),
      frame(frame_index) {}

TrackerParams radar_tracker_params() {
  TrackerParams p;
  p.q_pos = 1e-3;
  p.q_vel = 2.5e-4;
  p.r_meas = 4e-3;
  p.init_vel_var = 1e-2;
  return p;
}

namespace {

template <typename F>
auto stage(const char* name, int frame, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, frame, e.what());
  }
}

void log_tracklets(const Tracker& tr, std::vector<TrackletLogRow>& log) {
  for (const auto& t : tr.tracklets()) {
    const auto b = t.box();
    log.push_back({tr.frame(), t.id, to_string(t.status), b.u, b.v, b.w, b.l});
  }
}

template <typename Pos>
std::vector<TrackInstance> confirmed_instances(const Tracker& tr, Pos position) {
  std::vector<TrackInstance> out;
  auto add = [&](const Tracklet& t) {
    if (!t.ever_active) return;
    for (const auto& h : t.history) {
      if (auto p = position(h.box)) out.push_back({h.frame, t.id, *p});
    }
  };
  for (const auto& t : tr.finished()) add(t);
  for (const auto& t : tr.tracklets()) add(t);
  std::sort(out.begin(), out.end(), [](const TrackInstance& a, const TrackInstance& b) {
    return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id);
  });
  return out;
}

std::optional<Vec2> foot_position(const Homography& h, const Detection& box) {
  try {
    return project(h, box.u, box.bottom());
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

template <typename Row>
std::map<int, std::vector<Row>> by_frame(const std::vector<Row>& rows) {
  std::map<int, std::vector<Row>> out;
  for (const auto& r : rows) out[r.frame].push_back(r);
  return out;
}

Detection radar_box(const RadarDetectionRow& r, double box_m) {
  const Vec2 p = to_cartesian(r.range_m, r.azimuth_deg);
  Detection d;
  d.u = p.x;
  d.v = p.y;
  d.w = box_m;
  d.l = box_m;
  d.confidence = r.magnitude;
  return d;
}

void add_detection_rows(std::vector<MetricRow>& rows, const std::string& scope, const DetectionMetrics& m) {
  auto rate = [](const std::optional<double>& r) { return r ? fmt_real(*r) : std::string("undefined"); };
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const std::string cls(kClassNames[k]);
    rows.push_back({scope, cls, "fpr", rate(m.per_class[k].fpr)});
    rows.push_back({scope, cls, "mr", rate(m.per_class[k].mr)});
    rows.push_back({scope, cls, "accuracy", rate(m.per_class[k].accuracy)});
    rows.push_back({scope, cls, "tp", std::to_string(m.counts[k].tp)});
    rows.push_back({scope, cls, "fp", std::to_string(m.counts[k].fp)});
    rows.push_back({scope, cls, "tn", std::to_string(m.counts[k].tn)});
    rows.push_back({scope, cls, "fn", std::to_string(m.counts[k].fn)});
  }
  rows.push_back({scope, "macro", "fpr", rate(m.macro.fpr)});
  rows.push_back({scope, "macro", "mr", rate(m.macro.mr)});
  rows.push_back({scope, "macro", "accuracy", rate(m.macro.accuracy)});
}

void add_tracking_rows(std::vector<MetricRow>& rows, const std::string& scope, const TrackingMetrics& m) {
  auto rate = [](const std::optional<double>& r) { return r ? fmt_real(*r) : std::string("undefined"); };
  rows.push_back({scope, "-", "mr", rate(m.mr)});
  rows.push_back({scope, "-", "fpr", rate(m.fpr)});
  rows.push_back({scope, "-", "misses", std::to_string(m.misses)});
  rows.push_back({scope, "-", "false_alarms", std::to_string(m.false_alarms)});
  rows.push_back({scope, "-", "id_switches", std::to_string(m.id_switches)});
  rows.push_back({scope, "-", "gt_instances", std::to_string(m.gt_instances)});
  rows.push_back({scope, "-", "track_instances", std::to_string(m.track_instances)});
}

}  // namespace

TrackingRun track_camera(const std::vector<CameraDetectionRow>& dets, int frames, const TrackerParams& params,
                         const Homography& h) {
  const auto grouped = by_frame(dets);
  Tracker tr(params);
  TrackingRun run;
  for (int t = 0; t < frames; ++t) {
    std::vector<Detection> boxes;
    if (auto it = grouped.find(t); it != grouped.end()) {
      for (const auto& r : it->second) boxes.push_back(r.det);
    }
    tr.step(boxes);
    log_tracklets(tr, run.log);
  }
  run.instances = confirmed_instances(tr, [&](const Detection& b) { return foot_position(h, b); });
  return run;
}

TrackingRun track_radar(const std::vector<RadarDetectionRow>& dets, int frames, const TrackerParams& params,
                        double box_m) {
  const auto grouped = by_frame(dets);
  Tracker tr(params);
  TrackingRun run;
  for (int t = 0; t < frames; ++t) {
    std::vector<Detection> boxes;
    if (auto it = grouped.find(t); it != grouped.end()) {
      for (const auto& r : it->second) boxes.push_back(radar_box(r, box_m));
    }
    tr.step(boxes);
    log_tracklets(tr, run.log);
  }
  run.instances = confirmed_instances(tr, [](const Detection& b) { return std::optional<Vec2>(Vec2{b.u, b.v}); });
  return run;
}

TrackingComparison compare_tracking(const Scenario& scn, const RadarConfig& radar, const PipelineRunConfig& cfg) {
  const auto va = form_virtual_array(radar.tx_positions, radar.rx_positions);
  const int frames = cfg.frames > 0 ? std::min(cfg.frames, scn.duration) : scn.duration;
  std::vector<CameraDetectionRow> cam_rows;
  std::vector<RadarDetectionRow> radar_rows;
  std::vector<GtInstance> gt;
  RangeAzimuthMap prev;
  for (int t = 0; t < frames; ++t) {
    for (const auto& d : synth_camera_detections(scn, t)) cam_rows.push_back({t, d});
    for (const auto& g : ground_truth(scn, t)) gt.push_back({t, g.subject_id, g.position});
    const auto ra = range_azimuth_map(image_3d(synth_if_frame(scn, t, radar).cube, va, radar));
    const auto moving = filter_non_static(ca_cfar_2d(ra, cfg.cfar), ra, t > 0 ? &prev : nullptr);
    for (const auto& c : cluster(moving, cfg.cluster_radius_m, cfg.cluster_min_points))
      radar_rows.push_back({t, c.range_m, c.azimuth_deg, c.magnitude});
    prev = ra;
  }
  TrackingComparison out;
  out.camera = tracking_metrics(track_camera(cam_rows, frames, cfg.camera_tracker, scn.true_homography).instances, gt,
                                cfg.match_radius_m);
  out.radar = tracking_metrics(track_radar(radar_rows, frames, cfg.radar_tracker, cfg.radar_box_m).instances, gt,
                               cfg.match_radius_m);
  return out;
}

std::vector<FusedRow> fuse_predictions(const std::vector<PredictionRow>& preds,
                                       const std::vector<LocalizationRow>& locs, FusionChoice choice,
                                       const FusionConfig& cfg) {
  std::map<std::pair<int, int>, const LocalizationRow*> loc;
  for (const auto& l : locs) loc[{l.frame, l.subject}] = &l;
  std::vector<const PredictionRow*> order;
  for (const auto& p : preds) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const PredictionRow* a, const PredictionRow* b) {
    return std::tie(a->frame, a->subject) < std::tie(b->frame, b->subject);
  });

  std::map<int, std::vector<KnwlTrf>> knwl;
  std::map<int, std::vector<ResVoteShort>> votes;
  std::vector<FusedRow> out;
  for (const auto* p : order) {
    const auto it = loc.find({p->frame, p->subject});
    if (it == loc.end())
      throw std::runtime_error(fmt::format("no localization for frame {} subject {}", p->frame, p->subject));
    const double range = it->second->range_m;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      FusedRow r;
      r.frame = p->frame;
      r.subject = p->subject;
      r.cls = static_cast<int>(k);
      r.p = p->p[k];
      switch (choice) {
        case FusionChoice::knwltrf: {
          auto& st = knwl.try_emplace(p->subject, kNumClasses, KnwlTrf(cfg)).first->second[k];
          const auto o = st.step(r.p, range);
          r.p_hat = o.p_hat;
          r.g = st.g();
          r.c_g = st.c_g();
          r.s = st.s();
          r.c_s = st.c_s();
          r.transferred = o.transferred;
          r.decision = decide(r.p_hat, cfg.p_thr);
          break;
        }
        case FusionChoice::vote: {
          auto& st = votes.try_emplace(p->subject, kNumClasses, ResVoteShort(cfg.vote_window, cfg.p_thr))
                         .first->second[k];
          r.decision = st.step(r.p);
          r.p_hat = st.positive_fraction();
          break;
        }
        case FusionChoice::single:
          r.p_hat = r.p;
          r.decision = decide(r.p, cfg.p_thr);
          break;
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<FusedTrajectory> fused_trajectories(const std::vector<FusedRow>& fused, const std::vector<LabelRow>& labels) {
  std::map<std::pair<int, int>, const LabelRow*> lab;
  for (const auto& l : labels) lab[{l.frame, l.subject}] = &l;
  std::map<int, std::vector<const FusedRow*>> per_subject;
  for (const auto& r : fused) per_subject[r.subject].push_back(&r);

  std::vector<FusedTrajectory> out;
  for (auto& [subject, rows] : per_subject) {
    std::stable_sort(rows.begin(), rows.end(), [](const FusedRow* a, const FusedRow* b) {
      return std::tie(a->frame, a->cls) < std::tie(b->frame, b->cls);
    });
    FusedTrajectory tj;
    tj.subject = subject;
    std::map<int, int> votes;
    std::map<int, ClassFlags> classes;
    for (const auto* r : rows) {
      tj.decisions[static_cast<std::size_t>(r->cls)].push_back(r->decision);
      if (r->cls != 0) continue;
      if (auto it = lab.find({r->frame, r->subject}); it != lab.end() && it->second->gt_subject >= 0) {
        ++votes[it->second->gt_subject];
        classes.try_emplace(it->second->gt_subject, it->second->classes);
      }
    }
    int best = -1, best_n = 0;
    for (const auto& [gid, n] : votes) {
      if (n > best_n) {
        best = gid;
        best_n = n;
      }
    }
    if (best >= 0) tj.gt = classes[best];
    out.push_back(std::move(tj));
  }
  return out;
}

EvaluationReport evaluate(const EvaluationInputs& in, double p_thr, double match_radius_m) {
  std::map<std::pair<int, int>, ClassFlags> truth;
  for (const auto& l : in.labels) truth[{l.frame, l.subject}] = l.classes;
  auto label_of = [&](int frame, int subject) {
    const auto it = truth.find({frame, subject});
    if (it == truth.end()) throw std::runtime_error(fmt::format("no label for frame {} subject {}", frame, subject));
    return it->second;
  };

  std::vector<ClassFlags> dec, gt;
  for (const auto& p : in.predictions) {
    ClassFlags d{};
    for (std::size_t k = 0; k < kNumClasses; ++k) d[k] = decide(p.p[k], p_thr);
    dec.push_back(d);
    gt.push_back(label_of(p.frame, p.subject));
  }
  const auto single = detection_metrics(dec, gt);

  std::map<std::pair<int, int>, ClassFlags> fused_dec;
  for (const auto& r : in.fused) fused_dec[{r.frame, r.subject}][static_cast<std::size_t>(r.cls)] = r.decision;
  dec.clear();
  gt.clear();
  for (const auto& [key, d] : fused_dec) {
    dec.push_back(d);
    gt.push_back(label_of(key.first, key.second));
  }
  const auto fused_frame = detection_metrics(dec, gt);

  dec.clear();
  gt.clear();
  for (const auto& tj : fused_trajectories(in.fused, in.labels)) {
    if (tj.length() == 0) continue;
    ClassFlags d{};
    for (std::size_t k = 0; k < kNumClasses; ++k) d[k] = tj.decisions[k].back();
    dec.push_back(d);
    gt.push_back(tj.gt);
  }
  const auto fused_traj = detection_metrics(dec, gt);

  std::vector<GtInstance> gti;
  for (const auto& g : in.ground_truth) gti.push_back({g.frame, g.entry.subject_id, g.entry.position});
  const auto cam = tracking_metrics(in.camera_tracks, gti, match_radius_m);
  const auto rad = tracking_metrics(in.radar_tracks, gti, match_radius_m);

  EvaluationReport rep;
  add_detection_rows(rep.rows, "single_frame", single);
  add_detection_rows(rep.rows, "fused_per_frame", fused_frame);
  add_detection_rows(rep.rows, "fused_per_trajectory", fused_traj);
  add_tracking_rows(rep.rows, "tracking_camera", cam);
  add_tracking_rows(rep.rows, "tracking_radar_only", rad);

  rep.table = "# decisions reported in two modes: per-frame and per-trajectory (terminal frame)\n\n";
  rep.table += format_metrics_table(single, "single frame") + "\n";
  rep.table += format_metrics_table(fused_frame, "fused, per frame") + "\n";
  rep.table += format_metrics_table(fused_traj, "fused, per trajectory") + "\n";
  rep.table += fmt::format("tracking\n{:<12} {:>10} {:>10} {:>10}\n", "method", "MR", "FPR", "id_sw");
  rep.table += fmt::format("{:<12} {:>10} {:>10} {:>10}\n", "camera", format_rate(cam.mr), format_rate(cam.fpr),
                           cam.id_switches);
  rep.table += fmt::format("{:<12} {:>10} {:>10} {:>10}\n", "radar-only", format_rate(rad.mr), format_rate(rad.fpr),
                           rad.id_switches);
  return rep;
}

EvaluationInputs load_evaluation_inputs(const fs::path& dir) {
  EvaluationInputs in;
  in.predictions = read_predictions(dir / "predictions.csv");
  in.labels = read_labels(dir / "labels.csv");
  in.fused = read_fused_log(dir / "fused_log.csv");
  in.camera_tracks = read_track_instances(dir / "camera_tracks.csv");
  in.radar_tracks = read_track_instances(dir / "radar_tracks.csv");
  in.ground_truth = read_ground_truth(dir / "ground_truth.csv");
  return in;
}

PipelineResult run_pipeline(const PipelineRunConfig& cfg) {
  if (!fs::exists(cfg.scenario_path)) throw ConfigError("scenario file not found: " + cfg.scenario_path.string());
  Scenario scn;
  RadarConfig radar = default_radar_config();
  Homography h;
  try {
    scn = load_scenario(cfg.scenario_path);
  } catch (const std::exception& e) {
    throw ConfigError(cfg.scenario_path.string() + ": " + e.what());
  }
  if (!cfg.radar_config_path.empty()) {
    if (!fs::exists(cfg.radar_config_path))
      throw ConfigError("radar config file not found: " + cfg.radar_config_path.string());
    try {
      radar = load_radar_config(cfg.radar_config_path);
    } catch (const std::exception& e) {
      throw ConfigError(cfg.radar_config_path.string() + ": " + e.what());
    }
  }
  DerivedSpecs specs;
  try {
    specs = derive_specs(radar);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("radar config: ") + e.what());
  }
  if (radar.elevation_fft_size != CroppedCube::kElevation)
    throw ConfigError("radar config: elevation_fft_size must be 10 for the 24x24x10 crop");
  if (cfg.calibration_path.empty()) {
    h = scn.true_homography;
  } else {
    if (!fs::exists(cfg.calibration_path))
      throw ConfigError("calibration file not found: " + cfg.calibration_path.string());
    try {
      h = estimate_homography(load_correspondences(cfg.calibration_path));
    } catch (const std::exception& e) {
      throw ConfigError(cfg.calibration_path.string() + ": " + e.what());
    }
  }
  if (cfg.seed) scn.rng_seed = *cfg.seed;
  if (!(cfg.p_thr >= 0.0 && cfg.p_thr <= 1.0)) throw ConfigError("p_thr must be in [0, 1]");

  OracleParams oracle = cfg.oracle;
  oracle.seed = scn.rng_seed;
  FusionConfig fusion = cfg.fusion_cfg;
  fusion.range_bin_width_m = specs.range_bin_width_m;
  fusion.p_thr = cfg.p_thr;
  const int frames = cfg.frames > 0 ? std::min(cfg.frames, scn.duration) : scn.duration;
  const auto va = form_virtual_array(radar.tx_positions, radar.rx_positions);
  fs::create_directories(cfg.out_dir);

  std::vector<CameraDetectionRow> cam_rows;
  std::vector<GroundTruthRow> gt_rows;
  std::vector<RadarDetectionRow> radar_rows;
  std::vector<PredictionRow> preds;
  std::vector<LocalizationRow> locs;
  std::vector<LabelRow> labels;
  std::vector<TrackletLogRow> cam_log;
  Tracker tracker(cfg.camera_tracker);
  std::map<int, OffsetState> offsets;
  RangeAzimuthMap prev_ra;
  bool have_prev = false;

  for (int t = 0; t < frames; ++t) {
    const auto synth = stage("simulate", t, [&] { return synth_if_frame(scn, t, radar); });
    const auto cams = stage("simulate", t, [&] { return synth_camera_detections(scn, t); });
    const auto truth = stage("simulate", t, [&] { return ground_truth(scn, t); });
    for (const auto& d : cams) cam_rows.push_back({t, d});
    for (const auto& g : truth) gt_rows.push_back({t, g});

    const auto cube = stage("image", t, [&] { return image_3d(synth.cube, va, radar); });
    const auto ra = range_azimuth_map(cube);
    if (cfg.dump) {
      stage("dump", t, [&] {
        write_if_cube(cfg.out_dir / "if_cubes" / fmt::format("frame_{:05d}.mmwc", t), synth.cube);
        write_radar_cube(cfg.out_dir / "radar_cubes" / fmt::format("frame_{:05d}.mmwc", t), cube);
        return 0;
      });
    }

    if (cfg.radar_baseline) {
      stage("cfar", t, [&] {
        const auto pts = ca_cfar_2d(ra, cfg.cfar);
        const auto moving = filter_non_static(pts, ra, have_prev ? &prev_ra : nullptr);
        for (const auto& c : cluster(moving, cfg.cluster_radius_m, cfg.cluster_min_points))
          radar_rows.push_back({t, c.range_m, c.azimuth_deg, c.magnitude});
        return 0;
      });
      prev_ra = ra;
      have_prev = true;
    }

    stage("track", t, [&] {
      tracker.step(cams);
      log_tracklets(tracker, cam_log);
      for (const auto& tk : tracker.tracklets()) {
        if (tk.status == TrackStatus::dead) offsets.erase(tk.id);
      }
      return 0;
    });

    const double floor = noise_floor(ra, cfg.refine);
    for (const auto* tk : tracker.active()) {
      stage("localize", t, [&] {
        const auto foot = foot_position(h, tk->box());
        if (!foot) return 0;
        auto region = occupancy_region(h, tk->box(), cfg.region_length_m);
        const auto ref = refine_center(region, ra, floor, offsets[tk->id], cfg.refine);
        const Vec2 c = ref.region.center;
        const double range = std::hypot(c.x, c.y);
        const double az = rad2deg(std::atan2(c.x, c.y));
        CroppedCube cc;
        try {
          cc = crop_and_pad(cube, ref.region);
        } catch (const std::out_of_range&) {
          return 0;  // outside the radar field of view this frame
        }
        cc = range_compensate(cc);

        LabelRow label{t, tk->id, -1, {}};
        double best = cfg.match_radius_m;
        for (const auto& g : truth) {
          const double d = std::hypot(g.position.x - c.x, g.position.y - c.y);
          if (d <= best) {
            best = d;
            label.gt_subject = g.subject_id;
            label.classes = g.carried;
          }
        }
        const ClassProbabilities p = cfg.classifier == ClassifierChoice::energy
                                         ? energy_template_predict(cc, cfg.energy)
                                         : oracle_predict(label.classes, oracle, t, tk->id);
        preds.push_back({t, tk->id, p});
        locs.push_back({t, tk->id, c.x, c.y, range, az});
        labels.push_back(label);
        return 0;
      });
    }
  }

  const int last = frames - 1;
  const auto fused = stage("fuse", last, [&] { return fuse_predictions(preds, locs, cfg.fusion, fusion); });
  const auto radar_run = stage("track", last, [&] {
    return track_radar(radar_rows, frames, cfg.radar_tracker, cfg.radar_box_m);
  });

  EvaluationInputs in;
  in.predictions = preds;
  in.labels = labels;
  in.fused = fused;
  in.camera_tracks = confirmed_instances(tracker, [&](const Detection& b) { return foot_position(h, b); });
  in.radar_tracks = radar_run.instances;
  in.ground_truth = gt_rows;
  PipelineResult res;
  res.frames = frames;
  res.report = stage("evaluate", last, [&] { return evaluate(in, cfg.p_thr, cfg.match_radius_m); });

  stage("write", last, [&] {
    write_camera_detections(cfg.out_dir / "camera_detections.csv", cam_rows);
    write_ground_truth(cfg.out_dir / "ground_truth.csv", gt_rows);
    write_tracklet_log(cfg.out_dir / "tracklet_log.csv", cam_log);
    write_radar_detections(cfg.out_dir / "radar_detections.csv", radar_rows);
    write_tracklet_log(cfg.out_dir / "radar_tracklet_log.csv", radar_run.log);
    write_predictions(cfg.out_dir / "predictions.csv", preds);
    write_localization(cfg.out_dir / "localization.csv", locs);
    write_fused_log(cfg.out_dir / "fused_log.csv", fused);
    write_labels(cfg.out_dir / "labels.csv", labels);
    write_track_instances(cfg.out_dir / "camera_tracks.csv", in.camera_tracks);
    write_track_instances(cfg.out_dir / "radar_tracks.csv", in.radar_tracks);
    write_metrics(cfg.out_dir / "metrics.csv", res.report.rows);
    write_text(cfg.out_dir / "metrics.txt", res.report.table);
    return 0;
  });
  return res;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows, const std::string& title) {
  std::string out = fmt::format("{}\n{:>7} | {:>10} {:>10} {:>10} | {:>10} {:>10} {:>10}\n", title, "length",
                                "traj FPR", "traj MR", "traj acc", "frame FPR", "frame MR", "frame acc");
  for (const auto& r : rows) {
    out += fmt::format("{:>7} | {:>10} {:>10} {:>10} | {:>10} {:>10} {:>10}\n", r.length,
                       format_rate(r.per_trajectory.macro.fpr), format_rate(r.per_trajectory.macro.mr),
                       format_rate(r.per_trajectory.macro.accuracy), format_rate(r.per_frame.macro.fpr),
                       format_rate(r.per_frame.macro.mr), format_rate(r.per_frame.macro.accuracy));
  }
  return out;
}

Scenario random_scenario(std::uint64_t seed, const RandomScenarioSpec& spec) {
  Scenario scn;
  scn.rng_seed = seed;
  scn.duration = spec.duration;
  scn.multipath_ghost_rate = spec.ghost_rate;
  scn.camera_noise = spec.camera_noise;
  auto rng = make_rng(seed, "scenario");
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
  for (int i = 0; i < spec.subjects; ++i) {
    SubjectSpec s;
    s.speed_mps = uni(0.8, 1.4);
    for (int w = 0; w < 3; ++w) {
      Waypoint wp;
      wp.y = uni(2.5, 11.0);
      // keep the whole body inside the camera frustum
      wp.x = uni(-1.0, 1.0) * std::min(2.5, 0.5 * wp.y);
      const int pause = static_cast<int>(uni(0.0, 40.0));
      // subjects walk in; they only stop at later waypoints
      wp.pause_frames = w == 0 ? 0 : pause;
      s.waypoints.push_back(wp);
    }
    for (std::size_t k = 0; k < kNumClasses; ++k) s.carried[k] = uniform01(rng) < spec.carry_prob;
    scn.subjects.push_back(s);
  }
  validate(scn);
  return scn;
}

LengthStudyResult length_study(const LengthStudyConfig& cfg) {
  LengthStudyResult res;
  std::vector<FusedTrajectory> all_knwl, all_vote;
  std::vector<ClassFlags> single_dec, single_gt;
  for (int sc = 0; sc < cfg.scenarios; ++sc) {
    const auto seed = derive_seed(cfg.seed, "study", {static_cast<std::uint64_t>(sc)});
    const auto scn = random_scenario(seed, cfg.scenario);
    OracleParams oracle = cfg.oracle;
    oracle.seed = seed;
    std::vector<FusedTrajectory> knwl_sc, vote_sc;
    for (int i = 0; i < static_cast<int>(scn.subjects.size()); ++i) {
      const auto& subj = scn.subjects[static_cast<std::size_t>(i)];
      std::vector<KnwlTrf> kt(kNumClasses, KnwlTrf(cfg.fusion));
      std::vector<ResVoteShort> vt(kNumClasses, ResVoteShort(cfg.fusion.vote_window, cfg.fusion.p_thr));
      FusedTrajectory fk, fv;
      fk.subject = fv.subject = i;
      fk.gt = fv.gt = subj.carried;
      for (int t = 0; t < scn.duration; ++t) {
        const Vec2 pos = subject_position(subj, t, scn.frame_period_s);
        const double range = std::hypot(pos.x, pos.y);
        const auto p = oracle_predict(subj.carried, oracle, t, i);
        ClassFlags d{};
        for (std::size_t k = 0; k < kNumClasses; ++k) {
          fk.decisions[k].push_back(decide(kt[k].step(p[k], range).p_hat, cfg.fusion.p_thr));
          fv.decisions[k].push_back(vt[k].step(p[k]));
          d[k] = decide(p[k], cfg.fusion.p_thr);
        }
        single_dec.push_back(d);
        single_gt.push_back(subj.carried);
      }
      knwl_sc.push_back(fk);
      vote_sc.push_back(fv);
    }
    const int terminal = scn.duration;
    res.knwltrf_terminal.push_back(*length_sweep(knwl_sc, {terminal})[0].per_trajectory.macro.accuracy);
    res.vote_terminal.push_back(*length_sweep(vote_sc, {terminal})[0].per_trajectory.macro.accuracy);
    all_knwl.insert(all_knwl.end(), knwl_sc.begin(), knwl_sc.end());
    all_vote.insert(all_vote.end(), vote_sc.begin(), vote_sc.end());
  }
  res.knwltrf = length_sweep(all_knwl, cfg.lengths);
  res.vote = length_sweep(all_vote, cfg.lengths);
  res.single_frame_accuracy = detection_metrics(single_dec, single_gt).macro.accuracy.value_or(0.0);
  return res;
}

}  // namespace mmw
