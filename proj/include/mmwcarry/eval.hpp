#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mmwcarry/types.hpp"

namespace mmw {

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
};

/// Undefined (0/0) rates are empty, never zero.
struct Rates {
  std::optional<double> fpr;
  std::optional<double> mr;
  std::optional<double> accuracy;
};

Rates rates(const ConfusionCounts& c);

struct DetectionMetrics {
  std::array<ConfusionCounts, kNumClasses> counts{};
  std::array<Rates, kNumClasses> per_class{};
  Rates macro;  // mean over classes where the rate is defined
};

/// Throws std::invalid_argument when the two streams differ in length.
DetectionMetrics detection_metrics(const std::vector<ClassFlags>& decisions, const std::vector<ClassFlags>& gt);

struct TrackInstance {
  int frame = 0;
  int track_id = 0;
  Vec2 position;
};

struct GtInstance {
  int frame = 0;
  int subject_id = 0;
  Vec2 position;
};

struct TrackingMetrics {
  long gt_instances = 0;
  long track_instances = 0;
  long misses = 0;
  long false_alarms = 0;
  long id_switches = 0;
  std::optional<double> mr;   // misses / gt instances
  std::optional<double> fpr;  // false alarms / track instances
};

/// Per frame, pairs within `match_radius_m` are matched greedily by
/// increasing distance. Identity switches count a subject whose matched
/// track id differs from its previous match.
TrackingMetrics tracking_metrics(const std::vector<TrackInstance>& tracks, const std::vector<GtInstance>& gt,
                                 double match_radius_m = 0.5);

/// Fused per-frame decisions of one trajectory.
struct FusedTrajectory {
  int subject = 0;
  ClassFlags gt{};
  std::array<std::vector<bool>, kNumClasses> decisions;
  std::size_t length() const { return decisions[0].size(); }
};

struct SweepRow {
  int length = 0;
  DetectionMetrics per_trajectory;  // decision at frame min(length, n)
  DetectionMetrics per_frame;       // every frame up to length
};

/// Rows in the order of `lengths`.
std::vector<SweepRow> length_sweep(const std::vector<FusedTrajectory>& trajectories, const std::vector<int>& lengths);

/// "undefined" for an empty rate.
std::string format_rate(const std::optional<double>& r);

/// Aligned plain-text table: one row per class plus the macro row.
std::string format_metrics_table(const DetectionMetrics& m, const std::string& title);

}  // namespace mmw
