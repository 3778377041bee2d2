#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "mmwcarry/classify.hpp"
#include "mmwcarry/scene_sim.hpp"

using namespace mmw;

namespace {

// P(Beta(mu k, (1 - mu) k) > thr), from the regularized incomplete beta.
double prob_above(double mu, double kappa, double thr) {
  return boost::math::ibetac(mu * kappa, (1.0 - mu) * kappa, thr);
}

CroppedCube simulated_crop(int cls, double x, double y) {
  auto cfg = default_radar_config();
  cfg.chirps_per_frame = 4;
  Scenario scn;
  scn.rng_seed = 21;
  SubjectSpec s;
  s.waypoints = {{x, y, 0}};
  if (cls >= 0) s.carried[cls] = true;
  scn.subjects.push_back(s);
  const auto va = form_virtual_array(cfg.tx_positions, cfg.rx_positions);
  const auto cube = image_3d(synth_if_frame(scn, 0, cfg).cube, va, cfg);
  return range_compensate(crop_and_pad(cube, {{x, y}, 0.5, 1.0}));
}

OracleParams iid() {
  OracleParams p;
  p.subject_spread = 0.0;
  p.episode_spread = 0.0;
  return p;
}

}  // namespace

TEST(Decide, StrictThreshold) {
  EXPECT_TRUE(decide(0.9, 0.5));
  EXPECT_FALSE(decide(0.5, 0.5));
  EXPECT_TRUE(decide(0.3, 0.25));
  EXPECT_FALSE(decide(0.0));
}

TEST(Oracle, InfiniteConcentrationReturnsMeans) {
  OracleParams p = iid();
  p.kappa = std::numeric_limits<double>::infinity();
  p.mu_pos = {0.7, 0.8, 0.9};
  p.mu_neg = {0.1, 0.2, 0.3};
  const auto out = oracle_predict({true, false, true}, p, 3, 1);
  EXPECT_EQ(out[0], 0.7);
  EXPECT_EQ(out[1], 0.2);
  EXPECT_EQ(out[2], 0.9);
}

TEST(Oracle, PerfectOracle) {
  OracleParams p;
  p.kappa = std::numeric_limits<double>::infinity();
  p.mu_pos = {1.0, 1.0, 1.0};
  p.mu_neg = {0.0, 0.0, 0.0};
  for (int f = 0; f < 20; ++f) {
    const ClassFlags gt{f % 2 == 0, f % 3 == 0, false};
    const auto out = oracle_predict(gt, p, f, 0);
    for (std::size_t k = 0; k < kNumClasses; ++k) EXPECT_EQ(decide(out[k]), gt[k]);
  }
}

TEST(Oracle, RerunIsIdentical) {
  OracleParams p;
  p.seed = 99;
  p.subject_spread = 0.1;
  for (int f = 0; f < 50; ++f) {
    const auto a = oracle_predict({true, false, false}, p, f, 2);
    const auto b = oracle_predict({true, false, false}, p, f, 2);
    EXPECT_EQ(a.p, b.p);
  }
  p.seed = 100;
  EXPECT_NE(oracle_predict({true, false, false}, p, 0, 2).p, oracle_predict({true, false, false}, OracleParams{}, 0, 2).p);
}

TEST(Oracle, AccuracyMatchesIncompleteBeta) {
  OracleParams p = iid();
  p.seed = 7;
  p.kappa = 6.0;
  p.mu_pos = {0.62, 0.58, 0.66};
  p.mu_neg = {0.38, 0.42, 0.34};
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    int correct_pos = 0, correct_neg = 0;
    const int n = 10000;
    for (int f = 0; f < n; ++f) {
      correct_pos += decide(oracle_predict({true, true, true}, p, f, 0)[k]);
      correct_neg += !decide(oracle_predict({false, false, false}, p, f, 1)[k]);
    }
    EXPECT_NEAR(correct_pos / double(n), prob_above(p.mu_pos[k], p.kappa, 0.5), 0.02) << k;
    EXPECT_NEAR(correct_neg / double(n), 1.0 - prob_above(p.mu_neg[k], p.kappa, 0.5), 0.02) << k;
  }
}

TEST(Oracle, BetaSampleMoments) {
  // Mean mu, variance mu (1 - mu) / (kappa + 1).
  double s = 0, s2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_beta(0.3, 4.0, static_cast<std::uint64_t>(i));
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  EXPECT_NEAR(m, 0.3, 0.005);
  EXPECT_NEAR(s2 / n - m * m, 0.3 * 0.7 / 5.0, 0.002);
}

TEST(Oracle, SubjectSpreadIsPersistent) {
  OracleParams p = iid();
  p.kappa = std::numeric_limits<double>::infinity();
  p.subject_spread = 0.2;
  // With kappa infinite the output is the shifted mean: constant per subject.
  const double a0 = oracle_predict({true, true, true}, p, 0, 5)[0];
  for (int f = 1; f < 10; ++f) EXPECT_EQ(oracle_predict({true, true, true}, p, f, 5)[0], a0);
  EXPECT_NE(oracle_predict({true, true, true}, p, 0, 6)[0], a0);
  EXPECT_GE(a0, 0.02);
  EXPECT_LE(a0, 0.98);
}

TEST(Oracle, EpisodeShiftIsSmoothAndRepeatable) {
  OracleParams p = iid();
  p.kappa = std::numeric_limits<double>::infinity();
  p.episode_spread = 0.1;
  p.episode_frames = 20;
  p.mu_pos = {0.6, 0.6, 0.6};
  double prev = oracle_predict({true, true, true}, p, 0, 3)[1];
  double lo = 1, hi = 0;
  for (int f = 1; f < 400; ++f) {
    const double cur = oracle_predict({true, true, true}, p, f, 3)[1];
    // Linear between knots: a step is at most |z_{k+1} - z_k| * spread / 20.
    EXPECT_LT(std::abs(cur - prev), 0.1 * 8.0 / 20.0);
    lo = std::min(lo, cur);
    hi = std::max(hi, cur);
    prev = cur;
  }
  EXPECT_LT(lo, 0.6);
  EXPECT_GT(hi, 0.6);
  EXPECT_EQ(oracle_predict({true, true, true}, p, 77, 3)[1], oracle_predict({true, true, true}, p, 77, 3)[1]);
}

TEST(Oracle, DefaultsGiveTwoThirdsAccuracy) {
  // Mixture over many subjects: close to the calibrated 66%.
  const OracleParams p;
  long correct = 0, total = 0;
  for (int subj = 0; subj < 200; ++subj) {
    const ClassFlags gt{subj % 2 == 0, subj % 3 == 0, subj % 5 == 0};
    for (int f = 0; f < 150; ++f) {
      const auto out = oracle_predict(gt, p, f, subj);
      for (std::size_t k = 0; k < kNumClasses; ++k, ++total) correct += decide(out[k]) == gt[k];
    }
  }
  EXPECT_NEAR(correct / double(total), 0.66, 0.02);
}

TEST(Energy, ZeroCubeBelowHalf) {
  const CroppedCube zero;
  EXPECT_EQ(energy_ratio(zero), 0.0);
  const auto out = energy_template_predict(zero);
  const EnergyTemplateParams d;
  auto lo = [&](std::size_t k) { return 1.0 / (1.0 + std::exp(d.beta[k] / d.tau[k])); };
  // thresholds order phone < knife < laptop, so phone is capped by knife and knife by laptop
  EXPECT_NEAR(out[0], lo(0), 1e-15);
  EXPECT_NEAR(out[1], lo(1) * (1.0 - lo(2)), 1e-15);
  EXPECT_NEAR(out[2], lo(2) * (1.0 - lo(0)), 1e-15);
  for (std::size_t k = 0; k < kNumClasses; ++k) EXPECT_LT(out[k], 0.5);
}

TEST(Energy, ScaleInvariant) {
  const auto cc = simulated_crop(0, 0.4, 6.0);
  auto scaled = cc;
  for (auto& v : scaled.data) v *= 8.0f;  // power of two: exact in float
  const auto a = energy_template_predict(cc), b = energy_template_predict(scaled);
  for (std::size_t k = 0; k < kNumClasses; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
}

TEST(Energy, LaptopCropScoresPresent) {
  for (double y : {4.0, 6.5, 9.0}) {
    const auto with = energy_template_predict(simulated_crop(0, -0.6, y));
    const auto without = energy_template_predict(simulated_crop(-1, -0.6, y));
    EXPECT_GT(with[0], 0.5) << y;
    EXPECT_LT(without[0], 0.5) << y;
  }
}

TEST(Energy, LaptopDoesNotFireSmallerObjects) {
  for (double y : {4.0, 6.5, 9.0}) {
    const auto out = energy_template_predict(simulated_crop(0, -0.6, y));
    EXPECT_LT(out[1], 0.5) << y;
    EXPECT_LT(out[2], 0.5) << y;
  }
}

TEST(Energy, KnifeBetweenEmptyAndLaptop) {
  const double none = energy_ratio(simulated_crop(-1, 0.3, 5.5));
  const double knife = energy_ratio(simulated_crop(2, 0.3, 5.5));
  const double laptop = energy_ratio(simulated_crop(0, 0.3, 5.5));
  EXPECT_LT(none, knife);
  EXPECT_LT(knife, laptop);
}

TEST(Energy, OutputsInUnitCube) {
  CroppedCube cc;
  for (std::size_t i = 0; i < cc.data.size(); ++i) cc.data[i] = static_cast<float>((i * 7919) % 113);
  const EnergyTemplateClassifier clf;
  EXPECT_TRUE(clf.deterministic());
  const auto out = clf.predict(cc, 5.0, 0.0);
  for (double v : out.p) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}
