#include "mmwcarry/classify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "mmwcarry/rng.hpp"

namespace mmw {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Marsaglia-Tsang gamma(shape, 1) on the project's uniform/normal sources.
double sample_gamma(double shape, std::mt19937_64& rng) {
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = gaussian(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double energy_ratio(const CroppedCube& cc, const EnergyTemplateParams& params) {
  int pr = 0, pa = 0;
  float best = -1.0f;
  for (int r = 0; r < CroppedCube::kRange; ++r) {
    for (int a = 0; a < CroppedCube::kAzimuth; ++a) {
      for (int e = 0; e < CroppedCube::kElevation; ++e) {
        if (cc(r, a, e) > best) {
          best = cc(r, a, e);
          pr = r;
          pa = a;
        }
      }
    }
  }
  const int a0 = std::max(0, pa - params.half_azimuth);
  const int a1 = std::min(CroppedCube::kAzimuth - 1, pa + params.half_azimuth);
  auto band = [&](int r0, int r1) {
    double s = 0.0;
    for (int r = std::max(0, r0); r <= std::min(CroppedCube::kRange - 1, r1); ++r)
      for (int a = a0; a <= a1; ++a)
        for (int e = 0; e < CroppedCube::kElevation; ++e) s += static_cast<double>(cc(r, a, e)) * cc(r, a, e);
    return s;
  };
  const double body = band(pr - params.body_half_range, pr + params.body_half_range);
  if (!(body > 0.0)) return 0.0;
  const double front = band(pr - params.side_far, pr - params.side_near);
  const double back = band(pr + params.side_near, pr + params.side_far);
  return std::abs(front - back) / body;
}

ClassProbabilities energy_template_predict(const CroppedCube& cc, const EnergyTemplateParams& params) {
  const double ratio = energy_ratio(cc, params);
  ClassProbabilities out;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    out[k] = logistic((ratio - params.beta[k]) / params.tau[k]);
    // A ratio that clears a larger object's threshold belongs to that object.
    std::optional<std::size_t> up;
    for (std::size_t j = 0; j < kNumClasses; ++j) {
      if (params.beta[j] > params.beta[k] && (!up || params.beta[j] < params.beta[*up])) up = j;
    }
    if (up) out[k] *= 1.0 - logistic((ratio - params.beta[*up]) / params.tau[*up]);
  }
  return out;
}

double sample_beta(double mu, double kappa, std::uint64_t seed) {
  if (std::isinf(kappa)) return mu;
  if (mu <= 0.0) return 0.0;
  if (mu >= 1.0) return 1.0;
  std::mt19937_64 rng(seed);
  const double x = sample_gamma(mu * kappa, rng);
  const double y = sample_gamma((1.0 - mu) * kappa, rng);
  return x + y > 0.0 ? x / (x + y) : mu;
}

ClassProbabilities oracle_predict(const ClassFlags& gt, const OracleParams& params, int frame, int subject) {
  const auto subj = static_cast<std::uint64_t>(subject);
  ClassProbabilities out;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    double mu = gt[k] ? params.mu_pos[k] : params.mu_neg[k];
    double shift = 0.0;
    if (params.subject_spread > 0.0) {
      auto rng = make_rng(params.seed, "oracle-subject", {subj, k});
      shift += params.subject_spread * gaussian(rng);
    }
    if (params.episode_spread > 0.0 && params.episode_frames > 0) {
      const auto knot = [&](std::uint64_t i) {
        auto rng = make_rng(params.seed, "oracle-episode", {subj, k, i});
        return gaussian(rng);
      };
      const int i0 = frame / params.episode_frames;
      const double f = static_cast<double>(frame - i0 * params.episode_frames) / params.episode_frames;
      const auto i = static_cast<std::uint64_t>(i0);
      shift += params.episode_spread * ((1.0 - f) * knot(i) + f * knot(i + 1));
    }
    if (shift != 0.0) mu = std::clamp(mu + shift, 0.02, 0.98);
    const auto seed = derive_seed(params.seed, "oracle", {static_cast<std::uint64_t>(frame), subj, k});
    out[k] = std::clamp(sample_beta(mu, params.kappa, seed), 0.0, 1.0);
  }
  return out;
}

}  // namespace mmw
