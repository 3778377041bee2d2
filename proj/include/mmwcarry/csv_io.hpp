#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mmwcarry/classify.hpp"
#include "mmwcarry/eval.hpp"
#include "mmwcarry/scene_sim.hpp"
#include "mmwcarry/types.hpp"

namespace mmw {

// Every log is comma-separated with a fixed header line. Reals are written
// with 17 significant digits so a read-back is bit-exact.

struct CameraDetectionRow {
  int frame = 0;
  Detection det;
};

struct GroundTruthRow {
  int frame = 0;
  GroundTruthEntry entry;
};

struct TrackletLogRow {
  int frame = 0;
  int id = 0;
  std::string status;
  double u = 0.0, v = 0.0, w = 0.0, l = 0.0;
};

struct RadarDetectionRow {
  int frame = 0;
  double range_m = 0.0;
  double azimuth_deg = 0.0;
  double magnitude = 0.0;
};

struct PredictionRow {
  int frame = 0;
  int subject = 0;
  ClassProbabilities p;
};

struct LocalizationRow {
  int frame = 0;
  int subject = 0;
  double x = 0.0, y = 0.0;
  double range_m = 0.0;
  double azimuth_deg = 0.0;
};

struct FusedRow {
  int frame = 0;
  int subject = 0;
  int cls = 0;
  double p = 0.0;
  double p_hat = 0.0;
  double g = 0.0, c_g = 0.0, s = 0.0, c_s = 0.0;
  bool transferred = false;
  bool decision = false;
};

/// Ground-truth label attached to one (frame, tracklet) prediction; gt_subject
/// is -1 when no subject lies within the match radius.
struct LabelRow {
  int frame = 0;
  int subject = 0;
  int gt_subject = -1;
  ClassFlags classes{};
};

struct MetricRow {
  std::string scope;
  std::string cls;
  std::string metric;
  std::string value;
};

std::string fmt_real(double v);

/// Splits a CSV file into fields, checking the header. Throws
/// std::runtime_error naming the path on I/O or format problems.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header);

void write_camera_detections(const std::filesystem::path& p, const std::vector<CameraDetectionRow>& rows);
std::vector<CameraDetectionRow> read_camera_detections(const std::filesystem::path& p);

void write_ground_truth(const std::filesystem::path& p, const std::vector<GroundTruthRow>& rows);
std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& p);

void write_tracklet_log(const std::filesystem::path& p, const std::vector<TrackletLogRow>& rows);
std::vector<TrackletLogRow> read_tracklet_log(const std::filesystem::path& p);

void write_radar_detections(const std::filesystem::path& p, const std::vector<RadarDetectionRow>& rows);
std::vector<RadarDetectionRow> read_radar_detections(const std::filesystem::path& p);

void write_predictions(const std::filesystem::path& p, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> read_predictions(const std::filesystem::path& p);

void write_localization(const std::filesystem::path& p, const std::vector<LocalizationRow>& rows);
std::vector<LocalizationRow> read_localization(const std::filesystem::path& p);

void write_fused_log(const std::filesystem::path& p, const std::vector<FusedRow>& rows);
std::vector<FusedRow> read_fused_log(const std::filesystem::path& p);

void write_labels(const std::filesystem::path& p, const std::vector<LabelRow>& rows);
std::vector<LabelRow> read_labels(const std::filesystem::path& p);

void write_track_instances(const std::filesystem::path& p, const std::vector<TrackInstance>& rows);
std::vector<TrackInstance> read_track_instances(const std::filesystem::path& p);

void write_metrics(const std::filesystem::path& p, const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metrics(const std::filesystem::path& p);

void write_text(const std::filesystem::path& p, const std::string& text);

}  // namespace mmw
