#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mmwcarry/types.hpp"

namespace mmw {

struct EpsilonPolicy {
  double eps_high = 0.1;
  double eps_low = 0.02;
  double deviation_threshold = 0.15;
};

/// eps_high when the population standard deviation of `buffer` reaches the
/// threshold, eps_low otherwise. Throws std::invalid_argument on an empty buffer.
double epsilon_policy(std::span<const double> buffer, const EpsilonPolicy& policy = {});

struct FusionConfig {
  double range_bin_width_m = 8e6 * kSpeedOfLight / (2.0 * 79e12) / 256.0;  // default waveform
  EpsilonPolicy epsilon;
  /// Overrides the policy with a constant when set.
  std::optional<double> fixed_epsilon;
  int vote_window = 10;
  double p_thr = 0.5;
};

struct KnwlTrfOutput {
  double p_hat = 0.0;
  bool bin_changed = false;
  bool transferred = false;  // t_f fired
  double p_eval = 0.0;       // only meaningful when bin_changed
  double epsilon = 0.0;
};

/// Knowledge-transfer fusion of one (subject, class) stream. Each step first
/// outputs p_hat = (g + p)/(c_g + 1) from the previous global state; on a
/// range-bin change it then moves the finished segment (s, c_s) into the
/// global state when its mean is at least eps away from 0.5; finally the
/// instantaneous state restarts (new bin) or accumulates (same bin).
class KnwlTrf {
 public:
  explicit KnwlTrf(FusionConfig cfg = {}) : cfg_(cfg) {}

  /// Throws std::invalid_argument for p outside [0, 1] or a non-finite range.
  KnwlTrfOutput step(double p, double range_m);
  KnwlTrfOutput step_bin(double p, long bin);

  long range_bin(double range_m) const;

  double s() const { return s_; }
  double c_s() const { return c_s_; }
  double g() const { return g_; }
  double c_g() const { return c_g_; }
  bool started() const { return started_; }
  long last_bin() const { return last_bin_; }
  const std::vector<double>& recent() const { return recent_; }
  const FusionConfig& config() const { return cfg_; }

 private:
  FusionConfig cfg_;
  double s_ = 0.0, c_s_ = 0.0, g_ = 0.0, c_g_ = 0.0;
  long last_bin_ = 0;
  bool started_ = false;
  std::vector<double> recent_;  // p values of the current bin dwell
};

/// Majority of the decisions; a tie counts as positive. Throws on empty input.
bool res_vote(std::span<const bool> decisions);
bool res_vote(const std::deque<bool>& decisions);

/// Sliding-window vote over the last `window` per-frame decisions.
class ResVoteShort {
 public:
  explicit ResVoteShort(int window = 10, double p_thr = 0.5);
  /// Returns the fused decision after adding frame p.
  bool step(double p);
  /// Fraction of positives in the window.
  double positive_fraction() const;

 private:
  int window_;
  double p_thr_;
  std::deque<bool> recent_;
};

}  // namespace mmw
