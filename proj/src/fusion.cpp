#include "mmwcarry/fusion.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmwcarry/classify.hpp"

namespace mmw {

double epsilon_policy(std::span<const double> buffer, const EpsilonPolicy& policy) {
  if (buffer.empty()) throw std::invalid_argument("epsilon policy needs a non-empty buffer");
  const double n = static_cast<double>(buffer.size());
  const double mean = std::accumulate(buffer.begin(), buffer.end(), 0.0) / n;
  double var = 0.0;
  for (double p : buffer) var += (p - mean) * (p - mean);
  const double sd = std::sqrt(var / n);
  return sd >= policy.deviation_threshold ? policy.eps_high : policy.eps_low;
}

long KnwlTrf::range_bin(double range_m) const {
  if (!std::isfinite(range_m)) throw std::invalid_argument("range must be finite");
  return std::lround(range_m / cfg_.range_bin_width_m);
}

KnwlTrfOutput KnwlTrf::step(double p, double range_m) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  return step_bin(p, range_bin(range_m));
}

KnwlTrfOutput KnwlTrf::step_bin(double p, long bin) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  KnwlTrfOutput out;
  out.p_hat = (g_ + p) / (c_g_ + 1.0);

  if (!started_) {
    started_ = true;
    last_bin_ = bin;
    s_ = p;
    c_s_ = 1.0;
    recent_.assign(1, p);
    return out;
  }

  if (bin != last_bin_) {
    out.bin_changed = true;
    out.p_eval = s_ / c_s_;
    out.epsilon = cfg_.fixed_epsilon ? *cfg_.fixed_epsilon : epsilon_policy(recent_, cfg_.epsilon);
    if (std::abs(out.p_eval - 0.5) >= out.epsilon) {
      out.transferred = true;
      g_ += s_;
      c_g_ += c_s_;
    }
    s_ = p;
    c_s_ = 1.0;
    recent_.assign(1, p);
    last_bin_ = bin;
  } else {
    s_ += p;
    c_s_ += 1.0;
    recent_.push_back(p);
  }
  return out;
}

bool res_vote(std::span<const bool> decisions) {
  if (decisions.empty()) throw std::invalid_argument("vote needs at least one decision");
  std::size_t pos = 0;
  for (bool d : decisions) pos += d ? 1 : 0;
  return 2 * pos >= decisions.size();
}

bool res_vote(const std::deque<bool>& decisions) {
  if (decisions.empty()) throw std::invalid_argument("vote needs at least one decision");
  std::size_t pos = 0;
  for (bool d : decisions) pos += d ? 1 : 0;
  return 2 * pos >= decisions.size();
}

ResVoteShort::ResVoteShort(int window, double p_thr) : window_(window), p_thr_(p_thr) {
  if (window < 1) throw std::invalid_argument("vote window must be >= 1");
}

bool ResVoteShort::step(double p) {
  recent_.push_back(decide(p, p_thr_));
  while (static_cast<int>(recent_.size()) > window_) recent_.pop_front();
  return res_vote(recent_);
}

double ResVoteShort::positive_fraction() const {
  if (recent_.empty()) return 0.0;
  double pos = 0.0;
  for (bool d : recent_) pos += d ? 1.0 : 0.0;
  return pos / static_cast<double>(recent_.size());
}

}  // namespace mmw
