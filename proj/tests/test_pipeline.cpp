#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "mmwcarry/pipeline.hpp"

using namespace mmw;
namespace fs = std::filesystem;

namespace {

const fs::path kDemo = fs::path(MMW_SOURCE_DIR) / "data" / "demo_scenario.yaml";

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mmw_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Few chirps keep a 45-frame run to a couple of seconds.
fs::path short_radar(const fs::path& dir) {
  const auto p = dir / "radar.yaml";
  std::ofstream(p) << "chirps_per_frame: 4\n";
  return p;
}

class PipelineRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = scratch("run");
    cfg_.scenario_path = kDemo;
    cfg_.radar_config_path = short_radar(dir_);
    cfg_.out_dir = dir_ / "out";
    cfg_.frames = 45;
    result_ = run_pipeline(cfg_);
  }
  static inline fs::path dir_;
  static inline PipelineRunConfig cfg_;
  static inline PipelineResult result_;
};

}  // namespace

TEST_F(PipelineRun, WritesEveryStageLog) {
  for (const char* f : {"camera_detections.csv", "ground_truth.csv", "tracklet_log.csv", "radar_detections.csv",
                        "radar_tracklet_log.csv", "predictions.csv", "localization.csv", "fused_log.csv", "labels.csv",
                        "camera_tracks.csv", "radar_tracks.csv", "metrics.csv", "metrics.txt"}) {
    EXPECT_TRUE(fs::exists(cfg_.out_dir / f)) << f;
  }
  EXPECT_EQ(result_.frames, 45);
  EXPECT_FALSE(read_predictions(cfg_.out_dir / "predictions.csv").empty());
}

TEST_F(PipelineRun, RerunIsByteIdentical) {
  auto again = cfg_;
  again.out_dir = dir_ / "again";
  run_pipeline(again);
  EXPECT_EQ(slurp(cfg_.out_dir / "metrics.csv"), slurp(again.out_dir / "metrics.csv"));
  EXPECT_EQ(slurp(cfg_.out_dir / "fused_log.csv"), slurp(again.out_dir / "fused_log.csv"));
}

TEST_F(PipelineRun, FuseFromLogsMatchesRun) {
  const auto& d = cfg_.out_dir;
  FusionConfig fc = cfg_.fusion_cfg;
  fc.range_bin_width_m = derive_specs(default_radar_config()).range_bin_width_m;
  fc.p_thr = cfg_.p_thr;
  const auto fused = fuse_predictions(read_predictions(d / "predictions.csv"), read_localization(d / "localization.csv"),
                                      cfg_.fusion, fc);
  const auto logged = read_fused_log(d / "fused_log.csv");
  ASSERT_EQ(fused.size(), logged.size());
  for (std::size_t i = 0; i < fused.size(); ++i) {
    EXPECT_EQ(fused[i].p_hat, logged[i].p_hat) << i;
    EXPECT_EQ(fused[i].decision, logged[i].decision) << i;
    EXPECT_EQ(fused[i].transferred, logged[i].transferred) << i;
  }
}

TEST_F(PipelineRun, EvaluateFromLogsMatchesRun) {
  const auto rep = evaluate(load_evaluation_inputs(cfg_.out_dir), cfg_.p_thr, cfg_.match_radius_m);
  const auto logged = read_metrics(cfg_.out_dir / "metrics.csv");
  ASSERT_EQ(rep.rows.size(), logged.size());
  for (std::size_t i = 0; i < logged.size(); ++i) {
    EXPECT_EQ(rep.rows[i].scope, logged[i].scope);
    EXPECT_EQ(rep.rows[i].metric, logged[i].metric);
    EXPECT_EQ(rep.rows[i].value, logged[i].value) << rep.rows[i].scope << " " << rep.rows[i].metric;
  }
  EXPECT_EQ(rep.table, slurp(cfg_.out_dir / "metrics.txt"));
}

TEST_F(PipelineRun, TrackFromLogsMatchesRun) {
  const auto& d = cfg_.out_dir;
  const auto scn = load_scenario(kDemo);
  const auto cam = track_camera(read_camera_detections(d / "camera_detections.csv"), 45, cfg_.camera_tracker,
                                scn.true_homography);
  const auto logged = read_track_instances(d / "camera_tracks.csv");
  ASSERT_EQ(cam.instances.size(), logged.size());
  for (std::size_t i = 0; i < logged.size(); ++i) {
    EXPECT_EQ(cam.instances[i].frame, logged[i].frame);
    EXPECT_EQ(cam.instances[i].track_id, logged[i].track_id);
    EXPECT_EQ(cam.instances[i].position.x, logged[i].position.x);
  }
  const auto rad = track_radar(read_radar_detections(d / "radar_detections.csv"), 45, cfg_.radar_tracker,
                               cfg_.radar_box_m);
  EXPECT_EQ(rad.instances.size(), read_track_instances(d / "radar_tracks.csv").size());
}

TEST_F(PipelineRun, PredictionsHaveLabelsAndLocations) {
  const auto& d = cfg_.out_dir;
  const auto preds = read_predictions(d / "predictions.csv");
  EXPECT_EQ(preds.size(), read_labels(d / "labels.csv").size());
  EXPECT_EQ(preds.size(), read_localization(d / "localization.csv").size());
  EXPECT_EQ(read_fused_log(d / "fused_log.csv").size(), preds.size() * kNumClasses);
  for (const auto& p : preds) {
    EXPECT_GE(p.frame, cfg_.camera_tracker.birth_hits - 1);  // only active tracklets are classified
    for (double v : p.p.p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(PipelineConfig, MissingScenarioNamesPath) {
  PipelineRunConfig cfg;
  cfg.scenario_path = scratch("missing") / "nope.yaml";
  cfg.out_dir = scratch("missing_out");
  try {
    run_pipeline(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.yaml"), std::string::npos);
  }
}

TEST(PipelineConfig, BadInputsRejected) {
  const auto dir = scratch("bad");
  PipelineRunConfig cfg;
  cfg.scenario_path = kDemo;
  cfg.out_dir = dir / "out";
  cfg.radar_config_path = dir / "absent_radar.yaml";
  EXPECT_THROW(run_pipeline(cfg), ConfigError);

  cfg.radar_config_path = dir / "radar.yaml";
  std::ofstream(cfg.radar_config_path) << "elevation_fft_size: 8\n";
  EXPECT_THROW(run_pipeline(cfg), ConfigError);

  cfg.radar_config_path.clear();
  cfg.p_thr = 1.5;
  EXPECT_THROW(run_pipeline(cfg), ConfigError);

  cfg.p_thr = 0.5;
  cfg.scenario_path = dir / "broken.yaml";
  std::ofstream(cfg.scenario_path) << "subjects: [[[\n";
  EXPECT_THROW(run_pipeline(cfg), ConfigError);
}

TEST(PipelineConfig, ChoiceParsing) {
  EXPECT_EQ(parse_classifier("energy"), ClassifierChoice::energy);
  EXPECT_EQ(parse_classifier("oracle"), ClassifierChoice::oracle);
  EXPECT_EQ(parse_fusion("knwltrf"), FusionChoice::knwltrf);
  EXPECT_EQ(parse_fusion("vote"), FusionChoice::vote);
  EXPECT_EQ(parse_fusion("single"), FusionChoice::single);
  EXPECT_THROW(parse_classifier("cnn"), ConfigError);
  EXPECT_THROW(parse_fusion("mean"), ConfigError);
  EXPECT_STREQ(to_string(FusionChoice::vote), "vote");
}

TEST(Fuse, MissingLocalizationThrows) {
  std::vector<PredictionRow> preds{{0, 1, {{0.5, 0.5, 0.5}}}};
  EXPECT_THROW(fuse_predictions(preds, {}, FusionChoice::knwltrf, FusionConfig{}), std::runtime_error);
}

TEST(Fuse, SingleAndVoteModes) {
  std::vector<PredictionRow> preds;
  std::vector<LocalizationRow> locs;
  for (int t = 0; t < 4; ++t) {
    preds.push_back({t, 3, {{0.9, 0.1, 0.6}}});
    locs.push_back({t, 3, 0.0, 5.0, 5.0, 0.0});
  }
  const auto single = fuse_predictions(preds, locs, FusionChoice::single, FusionConfig{});
  ASSERT_EQ(single.size(), 12u);
  EXPECT_TRUE(single[0].decision);
  EXPECT_FALSE(single[1].decision);
  EXPECT_EQ(single[2].p_hat, 0.6);
  const auto vote = fuse_predictions(preds, locs, FusionChoice::vote, FusionConfig{});
  EXPECT_EQ(vote[10].p_hat, 0.0);  // class 1 never above threshold
  EXPECT_EQ(vote[9].p_hat, 1.0);   // class 0 always above
  EXPECT_TRUE(vote.back().decision);
}

TEST(RandomScenario, ValidAndSeeded) {
  RandomScenarioSpec spec;
  const auto a = random_scenario(7, spec);
  const auto b = random_scenario(7, spec);
  const auto c = random_scenario(8, spec);
  EXPECT_NO_THROW(validate(a));
  ASSERT_EQ(a.subjects.size(), 8u);
  EXPECT_EQ(a.subjects[3].waypoints[1].x, b.subjects[3].waypoints[1].x);
  EXPECT_NE(a.subjects[3].waypoints[1].x, c.subjects[3].waypoints[1].x);
  for (const auto& s : a.subjects) {
    EXPECT_EQ(s.waypoints.front().pause_frames, 0);
    for (const auto& w : s.waypoints) {
      EXPECT_LE(std::abs(w.x), 0.5 * w.y + 1e-12);
      EXPECT_GE(w.y, 2.5);
      EXPECT_LE(w.y, 11.0);
    }
  }
}

TEST(LengthStudy, SmallRunIsWellFormed) {
  LengthStudyConfig cfg;
  cfg.scenarios = 2;
  cfg.scenario.duration = 40;
  cfg.lengths = {1, 20, 40};
  const auto r = length_study(cfg);
  ASSERT_EQ(r.knwltrf.size(), 3u);
  ASSERT_EQ(r.vote.size(), 3u);
  EXPECT_EQ(r.knwltrf_terminal.size(), 2u);
  for (const auto& row : r.knwltrf) {
    ASSERT_TRUE(row.per_trajectory.macro.accuracy);
    EXPECT_GE(*row.per_trajectory.macro.accuracy, 0.0);
    EXPECT_LE(*row.per_trajectory.macro.accuracy, 1.0);
  }
  EXPECT_GT(r.single_frame_accuracy, 0.5);
  EXPECT_EQ(length_study(cfg).knwltrf_terminal, r.knwltrf_terminal);
}

TEST(CompareTracking, NoiselessTwoSubjectsAreClean) {
  RandomScenarioSpec spec;
  spec.subjects = 2;
  spec.duration = 60;
  const auto scn = random_scenario(3, spec);
  auto radar = default_radar_config();
  radar.chirps_per_frame = 2;
  const auto r = compare_tracking(scn, radar, PipelineRunConfig{});
  EXPECT_EQ(r.camera.gt_instances, 120);
  EXPECT_EQ(*r.camera.mr, 0.0);
  EXPECT_EQ(*r.camera.fpr, 0.0);
  EXPECT_EQ(r.camera.id_switches, 0);
}
