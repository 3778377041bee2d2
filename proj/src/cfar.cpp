#include "mmwcarry/cfar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mmw {

double cfar_alpha(int n_train, double pfa) {
  return n_train * (std::pow(pfa, -1.0 / n_train) - 1.0);
}

Vec2 to_cartesian(double range_m, double azimuth_deg) {
  const double a = deg2rad(azimuth_deg);
  return {range_m * std::sin(a), range_m * std::cos(a)};
}

std::vector<DetectionPoint> ca_cfar_2d(const RangeAzimuthMap& power, const CfarParams& p) {
  if (p.guard < 1 || p.train < 1) throw std::invalid_argument("CFAR guard and train must be >= 1");
  if (!(p.pfa > 0.0 && p.pfa < 1.0)) throw std::invalid_argument("CFAR pfa must be in (0, 1)");
  const int span = 2 * (p.guard + p.train) + 1;
  if (power.rows < span || power.cols < span) throw std::invalid_argument("map smaller than CFAR window");

  const int rows = power.rows;
  const int cols = power.cols;
  // Summed-area table with a zero border row/column.
  std::vector<double> sat(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0);
  auto S = [&](int r, int c) -> double& { return sat[static_cast<std::size_t>(r) * (cols + 1) + c]; };
  for (int r = 0; r < rows; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < cols; ++c) {
      row_sum += power.at(r, c);
      S(r + 1, c + 1) = S(r, c + 1) + row_sum;
    }
  }
  auto box = [&](int r0, int r1, int c0, int c1) {  // inclusive, clipped
    r0 = std::max(r0, 0);
    c0 = std::max(c0, 0);
    r1 = std::min(r1, rows - 1);
    c1 = std::min(c1, cols - 1);
    const double sum = S(r1 + 1, c1 + 1) - S(r0, c1 + 1) - S(r1 + 1, c0) + S(r0, c0);
    const int n = (r1 - r0 + 1) * (c1 - c0 + 1);
    return std::pair{sum, n};
  };

  std::map<int, double> alpha_cache;
  for (int n = 1; n <= span * span; ++n) alpha_cache[n] = cfar_alpha(n, p.pfa);

  const int outer = p.guard + p.train;
  std::vector<std::vector<DetectionPoint>> per_row(rows);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto [so, no] = box(r - outer, r + outer, c - outer, c + outer);
      const auto [si, ni] = box(r - p.guard, r + p.guard, c - p.guard, c + p.guard);
      const int n = no - ni;
      const double mean = (so - si) / n;
      const double v = power.at(r, c);
      if (v > alpha_cache.at(n) * mean && v > 0.0) {
        DetectionPoint d;
        d.row = r;
        d.col = c;
        d.range_m = r * power.range_bin_width_m;
        d.azimuth_deg = c < static_cast<int>(power.azimuth_deg.size()) ? power.azimuth_deg[c] : 0.0;
        d.magnitude = v;
        per_row[r].push_back(d);
      }
    }
  }
  std::vector<DetectionPoint> out;
  for (auto& v : per_row) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<DetectionPoint> filter_non_static(const std::vector<DetectionPoint>& points,
                                              const RangeAzimuthMap& current, const RangeAzimuthMap* previous,
                                              double threshold_db) {
  std::vector<DetectionPoint> out;
  if (!previous || previous->rows != current.rows || previous->cols != current.cols) return out;
  for (const auto& pt : points) {
    const double now = current.at(pt.row, pt.col);
    const double before = previous->at(pt.row, pt.col);
    const double change_db = before > 0.0 ? std::abs(10.0 * std::log10(now / before)) : INFINITY;
    if (change_db >= threshold_db) out.push_back(pt);
  }
  return out;
}

std::vector<Centroid> cluster(std::vector<DetectionPoint> points, double radius_m, int min_points) {
  std::sort(points.begin(), points.end(), [](const DetectionPoint& a, const DetectionPoint& b) {
    return std::tie(a.range_m, a.azimuth_deg, a.magnitude, a.row, a.col) <
           std::tie(b.range_m, b.azimuth_deg, b.magnitude, b.row, b.col);
  });
  const std::size_t n = points.size();
  std::vector<Vec2> xy(n);
  for (std::size_t i = 0; i < n; ++i) xy[i] = to_cartesian(points[i].range_m, points[i].azimuth_deg);
  const double r2 = radius_m * radius_m;
  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = xy[i].x - xy[j].x;
      const double dy = xy[i].y - xy[j].y;
      if (dx * dx + dy * dy <= r2) nb.push_back(j);
    }
    return nb;
  };

  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> label(n, kUnvisited);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    auto nb = neighbours(i);
    if (static_cast<int>(nb.size()) < min_points) {
      label[i] = kNoise;
      continue;
    }
    const int id = next++;
    label[i] = id;
    std::vector<std::size_t> queue(nb.begin(), nb.end());
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t j = queue[q];
      if (label[j] == kNoise) label[j] = id;
      if (label[j] != kUnvisited) continue;
      label[j] = id;
      auto nb2 = neighbours(j);
      if (static_cast<int>(nb2.size()) >= min_points) queue.insert(queue.end(), nb2.begin(), nb2.end());
    }
  }

  std::vector<Centroid> out(next);
  std::vector<Vec2> acc(next);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] < 0) continue;
    auto& c = out[label[i]];
    const double w = points[i].magnitude;
    acc[label[i]].x += w * xy[i].x;
    acc[label[i]].y += w * xy[i].y;
    c.magnitude += w;
    ++c.count;
  }
  for (int k = 0; k < next; ++k) {
    auto& c = out[k];
    if (c.magnitude > 0.0) {
      c.position = {acc[k].x / c.magnitude, acc[k].y / c.magnitude};
    } else {
      Vec2 m;
      for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != k) continue;
        m.x += xy[i].x / c.count;
        m.y += xy[i].y / c.count;
      }
      c.position = m;
    }
    c.range_m = std::hypot(c.position.x, c.position.y);
    c.azimuth_deg = rad2deg(std::atan2(c.position.x, c.position.y));
  }
  return out;
}

}  // namespace mmw
