#include "mmwcarry/tracker.hpp"

#include <algorithm>
#include <numeric>

#include "mmwcarry/assignment.hpp"

namespace mmw {

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat46 = Eigen::Matrix<double, 4, 6>;

constexpr double kMinSize = 1e-3;

Mat6 transition() {
  Mat6 f = Mat6::Identity();
  f(0, 4) = 1.0;
  f(1, 5) = 1.0;
  return f;
}

Mat46 observation() {
  Mat46 h = Mat46::Zero();
  h.leftCols<4>().setIdentity();
  return h;
}

}  // namespace

const char* to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::tentative: return "tentative";
    case TrackStatus::active: return "active";
    case TrackStatus::dead: return "dead";
  }
  return "?";
}

Detection Tracklet::box() const {
  Detection d;
  d.u = state.x(0);
  d.v = state.x(1);
  d.w = state.x(2);
  d.l = state.x(3);
  return d;
}

double iou(const Detection& a, const Detection& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.w * a.l + b.w * b.l - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Detection> filter_detections(const std::vector<Detection>& dets, double overlap_threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].confidence > dets[b].confidence; });
  std::vector<bool> keep(dets.size(), false);
  std::vector<std::size_t> kept;
  for (auto i : order) {
    bool ok = true;
    for (auto k : kept) {
      if (iou(dets[i], dets[k]) > overlap_threshold) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.push_back(i);
      keep[i] = true;
    }
  }
  std::vector<Detection> out;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (keep[i]) out.push_back(dets[i]);
  }
  return out;
}

Detection predict(Tracklet& tk, const TrackerParams& params) {
  const Mat6 f = transition();
  Mat6 q = Mat6::Zero();
  q.diagonal() << params.q_pos, params.q_pos, params.q_pos, params.q_pos, params.q_vel, params.q_vel;
  tk.state.x = f * tk.state.x;
  tk.state.P = f * tk.state.P * f.transpose() + q;
  return tk.box();
}

void update(Tracklet& tk, const Detection& meas, const TrackerParams& params) {
  const Mat46 h = observation();
  const Eigen::Matrix4d r = Eigen::Matrix4d::Identity() * params.r_meas;
  const Eigen::Vector4d z(meas.u, meas.v, meas.w, meas.l);
  const Eigen::Vector4d y = z - h * tk.state.x;
  const Eigen::Matrix4d s = h * tk.state.P * h.transpose() + r;
  const Eigen::Matrix<double, 6, 4> k = tk.state.P * h.transpose() * s.inverse();
  tk.state.x += k * y;
  // Joseph form keeps P symmetric positive semidefinite.
  const Mat6 ikh = Mat6::Identity() - k * h;
  tk.state.P = ikh * tk.state.P * ikh.transpose() + k * r * k.transpose();
  tk.state.P = 0.5 * (tk.state.P + tk.state.P.transpose());
  tk.state.x(2) = std::max(tk.state.x(2), kMinSize);
  tk.state.x(3) = std::max(tk.state.x(3), kMinSize);
}

Tracklet new_tracklet(int id, const Detection& det, const TrackerParams& params) {
  Tracklet tk;
  tk.id = id;
  tk.state.x << det.u, det.v, std::max(det.w, kMinSize), std::max(det.l, kMinSize), 0.0, 0.0;
  tk.state.P.setZero();
  tk.state.P.diagonal() << params.r_meas, params.r_meas, params.r_meas, params.r_meas, params.init_vel_var,
      params.init_vel_var;
  tk.consecutive_hits = 1;
  if (params.birth_hits <= 1) {
    tk.status = TrackStatus::active;
    tk.ever_active = true;
  }
  return tk;
}

void Tracker::step(const std::vector<Detection>& raw) {
  ++frame_;
  for (auto& t : tracks_) {
    if (t.status == TrackStatus::dead) finished_.push_back(std::move(t));
  }
  std::erase_if(tracks_, [](const Tracklet& t) { return t.status == TrackStatus::dead; });

  std::vector<Detection> predicted;
  predicted.reserve(tracks_.size());
  for (auto& t : tracks_) predicted.push_back(predict(t, params_));

  const auto dets = filter_detections(raw, params_.nms_threshold);
  std::vector<int> det_owner(dets.size(), -1);
  std::vector<int> track_match(tracks_.size(), -1);
  if (!tracks_.empty() && !dets.empty()) {
    Eigen::MatrixXd cost(tracks_.size(), dets.size());
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      for (std::size_t j = 0; j < dets.size(); ++j) cost(i, j) = 1.0 - iou(predicted[i], dets[j]);
    }
    const auto a = jv_assign(cost, params_.sentinel);
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      const int j = a.row_to_col[i];
      if (j < 0) continue;
      if (1.0 - cost(i, j) < params_.iou_gate) continue;
      track_match[i] = j;
      det_owner[j] = static_cast<int>(i);
    }
  }

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    auto& t = tracks_[i];
    if (track_match[i] >= 0) {
      update(t, dets[track_match[i]], params_);
      ++t.consecutive_hits;
      t.consecutive_misses = 0;
      if (t.status == TrackStatus::tentative && t.consecutive_hits >= params_.birth_hits) {
        t.status = TrackStatus::active;
        t.ever_active = true;
      }
    } else {
      t.consecutive_hits = 0;
      ++t.consecutive_misses;
      if (t.consecutive_misses >= params_.death_misses) t.status = TrackStatus::dead;
    }
    t.history.push_back({frame_, t.box(), track_match[i] >= 0});
  }

  for (std::size_t j = 0; j < dets.size(); ++j) {
    if (det_owner[j] >= 0) continue;
    auto t = new_tracklet(next_id_++, dets[j], params_);
    t.history.push_back({frame_, t.box(), true});
    tracks_.push_back(std::move(t));
  }
}

std::vector<const Tracklet*> Tracker::active() const {
  std::vector<const Tracklet*> out;
  for (const auto& t : tracks_) {
    if (t.status == TrackStatus::active) out.push_back(&t);
  }
  return out;
}

}  // namespace mmw
