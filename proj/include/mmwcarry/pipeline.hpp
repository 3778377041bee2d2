#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwcarry/calib.hpp"
#include "mmwcarry/cfar.hpp"
#include "mmwcarry/classify.hpp"
#include "mmwcarry/csv_io.hpp"
#include "mmwcarry/eval.hpp"
#include "mmwcarry/fusion.hpp"
#include "mmwcarry/radar_config.hpp"
#include "mmwcarry/scene_sim.hpp"
#include "mmwcarry/tracker.hpp"

namespace mmw {

enum class ClassifierChoice { energy, oracle };
enum class FusionChoice { knwltrf, vote, single };

ClassifierChoice parse_classifier(const std::string& s);
FusionChoice parse_fusion(const std::string& s);
const char* to_string(ClassifierChoice c);
const char* to_string(FusionChoice f);

/// Bad input files or options (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pipeline stage failed on a frame (CLI exit code 2).
struct StageError : std::runtime_error {
  StageError(std::string stage_name, int frame_index, const std::string& what);
  std::string stage;
  int frame;
};

/// Radar-plane tracker defaults for the CFAR baseline (metres, not pixels).
TrackerParams radar_tracker_params();

struct PipelineRunConfig {
  std::filesystem::path scenario_path;
  std::filesystem::path radar_config_path;  // empty: built-in defaults
  std::filesystem::path calibration_path;   // empty: use the scenario's true homography
  ClassifierChoice classifier = ClassifierChoice::oracle;
  FusionChoice fusion = FusionChoice::knwltrf;
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  double p_thr = 0.5;
  int frames = -1;  // <= 0: whole scenario
  bool dump = false;
  bool radar_baseline = true;

  OracleParams oracle;
  EnergyTemplateParams energy;
  TrackerParams camera_tracker;
  TrackerParams radar_tracker = radar_tracker_params();
  RefineParams refine;
  CfarParams cfar;
  FusionConfig fusion_cfg;
  double cluster_radius_m = 0.35;
  int cluster_min_points = 2;
  double radar_box_m = 0.8;
  double region_length_m = 1.0;
  double match_radius_m = 0.5;
};

/// Everything the evaluation stage reads.
struct EvaluationInputs {
  std::vector<PredictionRow> predictions;
  std::vector<LabelRow> labels;
  std::vector<FusedRow> fused;
  std::vector<TrackInstance> camera_tracks;
  std::vector<TrackInstance> radar_tracks;
  std::vector<GroundTruthRow> ground_truth;
};

struct EvaluationReport {
  std::vector<MetricRow> rows;
  std::string table;
};

EvaluationReport evaluate(const EvaluationInputs& in, double p_thr, double match_radius_m);
EvaluationInputs load_evaluation_inputs(const std::filesystem::path& dir);

struct PipelineResult {
  int frames = 0;
  EvaluationReport report;
};

/// Full chain; writes every stage log into out_dir. Throws ConfigError or
/// StageError.
PipelineResult run_pipeline(const PipelineRunConfig& cfg);

/// Camera tracking over a detection stream; returns the tracklet log and
/// the offline evaluation instances (every frame of each tracklet that ever
/// became active, positioned by projecting its bottom-center through h).
struct TrackingRun {
  std::vector<TrackletLogRow> log;
  std::vector<TrackInstance> instances;
};
TrackingRun track_camera(const std::vector<CameraDetectionRow>& dets, int frames, const TrackerParams& params,
                         const Homography& h);
/// Radar-only tracking of clustered CFAR centroids as fixed-size boxes.
TrackingRun track_radar(const std::vector<RadarDetectionRow>& dets, int frames, const TrackerParams& params,
                        double box_m);

/// Camera-aided and radar-only (CFAR) tracking on one in-memory scenario,
/// scored against ground truth. Skips classification; uses the scenario's
/// true homography and the tracker, CFAR and cluster knobs from cfg.
struct TrackingComparison {
  TrackingMetrics camera;
  TrackingMetrics radar;
};
TrackingComparison compare_tracking(const Scenario& scn, const RadarConfig& radar, const PipelineRunConfig& cfg);

/// Fuses a prediction log with its localization log; rows are matched by
/// (frame, subject). Output order: frame, subject, class.
std::vector<FusedRow> fuse_predictions(const std::vector<PredictionRow>& preds,
                                       const std::vector<LocalizationRow>& locs, FusionChoice choice,
                                       const FusionConfig& cfg);

/// One trajectory per subject id; truth is the majority matched subject.
std::vector<FusedTrajectory> fused_trajectories(const std::vector<FusedRow>& fused, const std::vector<LabelRow>& labels);

std::string format_sweep_table(const std::vector<SweepRow>& rows, const std::string& title);

/// Random walking subjects in the default hall.
struct RandomScenarioSpec {
  int subjects = 8;
  int duration = 150;
  double ghost_rate = 0.0;
  double carry_prob = 0.5;
  CameraNoise camera_noise;
};
Scenario random_scenario(std::uint64_t seed, const RandomScenarioSpec& spec);

/// Oracle-on-ground-truth study of fused accuracy against trajectory length.
struct LengthStudyConfig {
  int scenarios = 20;
  RandomScenarioSpec scenario;
  std::uint64_t seed = 1;
  OracleParams oracle;
  FusionConfig fusion;
  std::vector<int> lengths{1, 10, 30, 60, 100, 150};
};

struct LengthStudyResult {
  std::vector<SweepRow> knwltrf;
  std::vector<SweepRow> vote;
  /// Terminal per-trajectory macro accuracy per scenario.
  std::vector<double> knwltrf_terminal;
  std::vector<double> vote_terminal;
  double single_frame_accuracy = 0.0;
};

LengthStudyResult length_study(const LengthStudyConfig& cfg);

}  // namespace mmw
