#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mmwcarry/types.hpp"

namespace mmw {

struct TrackerParams {
  double iou_gate = 0.3;        // matches below this IoU are rejected
  double nms_threshold = 0.7;   // detection pairs above this IoU are thinned
  int birth_hits = 20;          // consecutive matches to become active
  int death_misses = 40;        // consecutive misses to die
  double q_pos = 1.0;           // process noise on u, v, w, l
  double q_vel = 0.25;          // process noise on du, dv
  double r_meas = 4.0;          // measurement noise on u, v, w, l
  double init_vel_var = 100.0;  // initial velocity variance of a new tracklet
  double sentinel = 1e6;        // padding cost for the assignment
};

enum class TrackStatus { tentative, active, dead };

const char* to_string(TrackStatus s);

/// State (u, v, w, l, du, dv) with its covariance.
struct BBoxState {
  Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, 6, 6> P = Eigen::Matrix<double, 6, 6>::Identity();
};

struct TrackPoint {
  int frame = 0;
  Detection box;
  bool matched = false;
};

struct Tracklet {
  int id = 0;
  BBoxState state;
  int consecutive_hits = 0;
  int consecutive_misses = 0;
  TrackStatus status = TrackStatus::tentative;
  bool ever_active = false;
  std::vector<TrackPoint> history;

  Detection box() const;
};

double iou(const Detection& a, const Detection& b);

/// Greedy suppression by descending confidence: a box is dropped when its IoU
/// with an already kept box exceeds `overlap_threshold`. Kept boxes stay in
/// their original order.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets, double overlap_threshold);

/// Constant-velocity prediction in place; returns the predicted box.
Detection predict(Tracklet& tk, const TrackerParams& params);

/// Kalman measurement update with a box; clamps w, l to a small positive floor.
void update(Tracklet& tk, const Detection& meas, const TrackerParams& params);

Tracklet new_tracklet(int id, const Detection& det, const TrackerParams& params);

class Tracker {
 public:
  explicit Tracker(TrackerParams params = {}) : params_(params) {}

  /// One frame: drop last frame's dead, predict, thin detections, associate by
  /// JV on 1 - IoU, update matches, age misses, seed tentative tracklets.
  void step(const std::vector<Detection>& dets);

  /// All tracklets alive or killed during the last step.
  const std::vector<Tracklet>& tracklets() const { return tracks_; }
  /// Tracklets emitted downstream this frame (status active).
  std::vector<const Tracklet*> active() const;
  /// Tracklets removed in earlier steps, in death order.
  const std::vector<Tracklet>& finished() const { return finished_; }
  int frame() const { return frame_; }
  const TrackerParams& params() const { return params_; }

 private:
  TrackerParams params_;
  std::vector<Tracklet> tracks_;
  std::vector<Tracklet> finished_;
  int next_id_ = 0;
  int frame_ = -1;
};

}  // namespace mmw
