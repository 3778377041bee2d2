#pragma once

#include <array>
#include <cstdint>

#include "mmwcarry/imaging.hpp"
#include "mmwcarry/types.hpp"

namespace mmw {

/// Independent per-class head outputs; no sum-to-one constraint.
struct ClassProbabilities {
  std::array<double, kNumClasses> p{};

  double operator[](std::size_t i) const { return p[i]; }
  double& operator[](std::size_t i) { return p[i]; }
};

/// Per-frame predictor contract: crop plus its center in, probabilities out.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual ClassProbabilities predict(const CroppedCube& cc, double center_range_m,
                                     double center_azimuth_deg) const = 0;
  virtual bool deterministic() const = 0;
};

struct EnergyTemplateParams {
  /// Ratio thresholds per class, between the simulator's amplitude bands.
  /// The phone band overlaps the empty-subject band.
  std::array<double, kNumClasses> beta{0.20, 0.035, 0.055};
  std::array<double, kNumClasses> tau{0.03, 0.01, 0.012};
  /// Torso window: +/- body_half_range range cells around the crop peak.
  int body_half_range = 1;
  /// Azimuth half-width shared by every window.
  int half_azimuth = 3;
  /// Side bands are range cells [near, far] in front of and behind the peak.
  int side_near = 2;
  int side_far = 4;
};

/// E_body: energy in the torso window around the crop peak (all elevations).
/// E_obj: |front band - back band|, the off-torso energy that is not
/// explained by the torso's own range sidelobes, which are symmetric.
/// Returns E_obj / E_body; an empty crop has ratio 0.
double energy_ratio(const CroppedCube& cc, const EnergyTemplateParams& params = {});
/// score_c = L((ratio - beta_c) / tau_c) * (1 - L((ratio - beta_u) / tau_u)),
/// with u the class of next larger threshold (no upper factor for the largest),
/// so each class answers for a band of ratios.
ClassProbabilities energy_template_predict(const CroppedCube& cc, const EnergyTemplateParams& params = {});

class EnergyTemplateClassifier final : public Classifier {
 public:
  explicit EnergyTemplateClassifier(EnergyTemplateParams params = {}) : params_(params) {}
  ClassProbabilities predict(const CroppedCube& cc, double, double) const override {
    return energy_template_predict(cc, params_);
  }
  bool deterministic() const override { return true; }

 private:
  EnergyTemplateParams params_;
};

struct OracleParams {
  // Defaults give ~66% single-frame macro accuracy at p_thr = 0.5 on the
  // random walking scenarios.
  std::array<double, kNumClasses> mu_pos{0.595, 0.595, 0.595};
  std::array<double, kNumClasses> mu_neg{0.405, 0.405, 0.405};
  /// Beta concentration; infinity returns the means exactly.
  double kappa = 6.0;
  /// Spread of a persistent per-(subject, class) shift of the mean, so some
  /// subjects stay hard for the whole trajectory. Zero disables it.
  double subject_spread = 0.05;
  /// Slowly varying shift of the mean: piecewise-linear noise with knots
  /// every `episode_frames` frames and standard deviation `episode_spread`.
  /// Models the frame-to-frame correlation of a real network's errors.
  double episode_spread = 0.15;
  int episode_frames = 30;
  std::uint64_t seed = 0;
};

/// Beta draw with mean mu and concentration kappa, via two gamma draws.
double sample_beta(double mu, double kappa, std::uint64_t seed);

/// Per class: Beta(mu*kappa, (1-mu)*kappa) with mu = mu_pos if the class is
/// carried else mu_neg (plus the optional subject and episode shifts, then
/// clamped to [0.02, 0.98]), seeded from (seed, frame, subject, class).
ClassProbabilities oracle_predict(const ClassFlags& gt, const OracleParams& params, int frame, int subject);

/// Strict: present iff p > p_thr.
inline bool decide(double p, double p_thr = 0.5) { return p > p_thr; }

}  // namespace mmw
