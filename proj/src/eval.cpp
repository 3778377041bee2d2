#include "mmwcarry/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace mmw {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

Rates rates(const ConfusionCounts& c) {
  Rates r;
  if (c.fp + c.tn > 0) r.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
  if (c.fn + c.tp > 0) r.mr = static_cast<double>(c.fn) / static_cast<double>(c.fn + c.tp);
  if (c.total() > 0) r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  return r;
}

namespace {

std::optional<double> mean_defined(const std::array<Rates, kNumClasses>& rs, std::optional<double> Rates::*field) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rs) {
    if (const auto& v = r.*field) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

DetectionMetrics finish(const std::array<ConfusionCounts, kNumClasses>& counts) {
  DetectionMetrics m;
  m.counts = counts;
  for (std::size_t k = 0; k < kNumClasses; ++k) m.per_class[k] = rates(counts[k]);
  m.macro.fpr = mean_defined(m.per_class, &Rates::fpr);
  m.macro.mr = mean_defined(m.per_class, &Rates::mr);
  m.macro.accuracy = mean_defined(m.per_class, &Rates::accuracy);
  return m;
}

void tally(ConfusionCounts& c, bool decided, bool truth) {
  if (decided && truth) ++c.tp;
  else if (decided) ++c.fp;
  else if (truth) ++c.fn;
  else ++c.tn;
}

}  // namespace

DetectionMetrics detection_metrics(const std::vector<ClassFlags>& decisions, const std::vector<ClassFlags>& gt) {
  if (decisions.size() != gt.size()) throw std::invalid_argument("decision and ground-truth streams differ in length");
  std::array<ConfusionCounts, kNumClasses> counts{};
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    for (std::size_t k = 0; k < kNumClasses; ++k) tally(counts[k], decisions[i][k], gt[i][k]);
  }
  return finish(counts);
}

TrackingMetrics tracking_metrics(const std::vector<TrackInstance>& tracks, const std::vector<GtInstance>& gt,
                                 double match_radius_m) {
  TrackingMetrics m;
  std::map<int, std::pair<std::vector<const TrackInstance*>, std::vector<const GtInstance*>>> frames;
  for (const auto& t : tracks) frames[t.frame].first.push_back(&t);
  for (const auto& g : gt) frames[g.frame].second.push_back(&g);

  std::map<int, int> last_track_of_subject;
  for (auto& [frame, pair] : frames) {
    auto& [ts, gs] = pair;
    m.track_instances += static_cast<long>(ts.size());
    m.gt_instances += static_cast<long>(gs.size());
    std::vector<std::tuple<double, int, int, std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (std::size_t j = 0; j < gs.size(); ++j) {
        const double d = std::hypot(ts[i]->position.x - gs[j]->position.x, ts[i]->position.y - gs[j]->position.y);
        if (d <= match_radius_m) cand.emplace_back(d, gs[j]->subject_id, ts[i]->track_id, i, j);
      }
    }
    std::sort(cand.begin(), cand.end());
    std::vector<bool> t_used(ts.size(), false), g_used(gs.size(), false);
    for (const auto& [d, sid, tid, i, j] : cand) {
      if (t_used[i] || g_used[j]) continue;
      t_used[i] = g_used[j] = true;
      auto it = last_track_of_subject.find(sid);
      if (it != last_track_of_subject.end() && it->second != tid) ++m.id_switches;
      last_track_of_subject[sid] = tid;
    }
    m.false_alarms += std::count(t_used.begin(), t_used.end(), false);
    m.misses += std::count(g_used.begin(), g_used.end(), false);
  }
  if (m.gt_instances > 0) m.mr = static_cast<double>(m.misses) / static_cast<double>(m.gt_instances);
  if (m.track_instances > 0) m.fpr = static_cast<double>(m.false_alarms) / static_cast<double>(m.track_instances);
  return m;
}

std::vector<SweepRow> length_sweep(const std::vector<FusedTrajectory>& trajectories, const std::vector<int>& lengths) {
  std::vector<SweepRow> rows;
  for (int len : lengths) {
    if (len < 1) throw std::invalid_argument("sweep lengths must be >= 1");
    std::array<ConfusionCounts, kNumClasses> traj{}, frame{};
    for (const auto& t : trajectories) {
      const std::size_t n = t.length();
      if (n == 0) continue;
      const std::size_t last = std::min<std::size_t>(static_cast<std::size_t>(len), n);
      for (std::size_t k = 0; k < kNumClasses; ++k) {
        tally(traj[k], t.decisions[k][last - 1], t.gt[k]);
        for (std::size_t i = 0; i < last; ++i) tally(frame[k], t.decisions[k][i], t.gt[k]);
      }
    }
    rows.push_back({len, finish(traj), finish(frame)});
  }
  return rows;
}

std::string format_rate(const std::optional<double>& r) { return r ? fmt::format("{:.4f}", *r) : "undefined"; }

std::string format_metrics_table(const DetectionMetrics& m, const std::string& title) {
  std::string out = fmt::format("{}\n{:<8} {:>10} {:>10} {:>10} {:>6} {:>6} {:>6} {:>6}\n", title, "class", "FPR", "MR",
                                "accuracy", "TP", "FP", "TN", "FN");
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const auto& r = m.per_class[k];
    const auto& c = m.counts[k];
    out += fmt::format("{:<8} {:>10} {:>10} {:>10} {:>6} {:>6} {:>6} {:>6}\n", kClassNames[k], format_rate(r.fpr),
                       format_rate(r.mr), format_rate(r.accuracy), c.tp, c.fp, c.tn, c.fn);
  }
  out += fmt::format("{:<8} {:>10} {:>10} {:>10}\n", "macro", format_rate(m.macro.fpr), format_rate(m.macro.mr),
                     format_rate(m.macro.accuracy));
  return out;
}

}  // namespace mmw
