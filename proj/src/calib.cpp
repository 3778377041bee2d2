#include "mmwcarry/calib.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmwcarry/cfar.hpp"

namespace mmw {

namespace {

// Similarity that moves the centroid to the origin and the mean distance to sqrt(2).
Eigen::Matrix3d normalizer(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double d = 0.0;
  for (const auto& p : pts) d += (p - c).norm();
  d /= static_cast<double>(pts.size());
  if (!(d > 0.0)) throw std::invalid_argument("degenerate configuration");
  const double s = std::sqrt(2.0) / d;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * c.x(), 0.0, s, -s * c.y(), 0.0, 0.0, 1.0;
  return t;
}

bool collinear(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d ab = b - a;
  const Eigen::Vector2d ac = c - a;
  const double cross = ab.x() * ac.y() - ab.y() * ac.x();
  return std::abs(cross) <= 1e-9 * std::max(1.0, ab.norm() * ac.norm());
}

bool minimal_set_degenerate(const std::vector<Eigen::Vector2d>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t k = j + 1; k < p.size(); ++k)
        if (collinear(p[i], p[j], p[k])) return true;
  return false;
}

}  // namespace

Homography estimate_homography(const std::vector<PointCorrespondence>& corrs) {
  const std::size_t n = corrs.size();
  if (n < 4) throw std::invalid_argument("insufficient correspondences");
  std::vector<Eigen::Vector2d> img(n), flr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = corrs[i];
    if (!std::isfinite(c.u) || !std::isfinite(c.v) || !std::isfinite(c.x) || !std::isfinite(c.y))
      throw std::invalid_argument("correspondence is not finite");
    img[i] = {c.u, c.v};
    flr[i] = {c.x, c.y};
  }
  const Eigen::Matrix3d ti = normalizer(img);
  const Eigen::Matrix3d tf = normalizer(flr);
  std::vector<Eigen::Vector2d> ni(n), nf(n);
  for (std::size_t i = 0; i < n; ++i) {
    ni[i] = (ti * img[i].homogeneous()).hnormalized();
    nf[i] = (tf * flr[i].homogeneous()).hnormalized();
  }
  if (n == 4 && (minimal_set_degenerate(ni) || minimal_set_degenerate(nf)))
    throw std::invalid_argument("degenerate configuration");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * std::max<std::size_t>(n, 5)), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = ni[i].x(), v = ni[i].y(), x = nf[i].x(), y = nf[i].y();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << -u, -v, -1.0, 0.0, 0.0, 0.0, u * x, v * x, x;
    a.row(r + 1) << 0.0, 0.0, 0.0, -u, -v, -1.0, u * y, v * y, y;
  }
  // Zero rows pad the 8x9 minimal case so the SVD returns a full V.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) <= 1e-10 * sv(0)) throw std::invalid_argument("degenerate configuration");
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography(tf.inverse() * hn * ti);
}

double reprojection_error(const Homography& h, const PointCorrespondence& c) {
  const Vec2 p = project(h, c.u, c.v);
  return std::hypot(p.x - c.x, p.y - c.y);
}

std::vector<double> leave_one_out_errors(const std::vector<PointCorrespondence>& corrs) {
  if (corrs.size() < 5) throw std::invalid_argument("insufficient correspondences");
  std::vector<double> out;
  out.reserve(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    std::vector<PointCorrespondence> rest;
    for (std::size_t j = 0; j < corrs.size(); ++j) {
      if (j != i) rest.push_back(corrs[j]);
    }
    out.push_back(reprojection_error(estimate_homography(rest), corrs[i]));
  }
  return out;
}

std::vector<PointCorrespondence> load_correspondences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration file: " + path.string());
  std::vector<PointCorrespondence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    PointCorrespondence c;
    if (!(ss >> c.u)) continue;
    if (!(ss >> c.v >> c.x >> c.y))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected \"u v x y\"");
    out.push_back(c);
  }
  return out;
}

OccupancyRegion occupancy_region(const Homography& h, const Detection& box, double length_m) {
  const double bottom = box.bottom();
  const Vec2 left = project(h, box.left(), bottom);
  const Vec2 right = project(h, box.right(), bottom);
  OccupancyRegion r;
  r.center = project(h, box.u, bottom);
  r.width = std::abs(left.x - right.x);
  r.length = length_m;
  return r;
}

Vec2 OffsetState::mean() const {
  Vec2 m;
  if (offsets.empty()) return m;
  for (const auto& o : offsets) {
    m.x += o.x;
    m.y += o.y;
  }
  m.x /= static_cast<double>(offsets.size());
  m.y /= static_cast<double>(offsets.size());
  return m;
}

double noise_floor(const RangeAzimuthMap& ra, const RefineParams& params) {
  if (ra.values.empty()) return 0.0;
  std::vector<double> v = ra.values;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return params.noise_floor_factor * *mid;
}

RefineResult refine_center(const OccupancyRegion& region, const RangeAzimuthMap& ra, double floor,
                           OffsetState& state, const RefineParams& params) {
  const Vec2 raw = region.center;
  const Vec2 bias = state.mean();
  RefineResult out;
  out.region = region;
  out.region.center = {raw.x + bias.x, raw.y + bias.y};

  const double range = std::hypot(out.region.center.x, out.region.center.y);
  const double az = rad2deg(std::atan2(out.region.center.x, out.region.center.y));
  const int r0 = std::max(0, static_cast<int>(std::ceil((range - params.range_tolerance_m) / ra.range_bin_width_m)));
  const int r1 = std::min(ra.rows - 1,
                          static_cast<int>(std::floor((range + params.range_tolerance_m) / ra.range_bin_width_m)));
  double best = floor;
  int br = -1, bc = -1;
  for (int r = r0; r <= r1; ++r) {
    for (int c = 0; c < ra.cols; ++c) {
      const double a = ra.azimuth_deg[c];
      if (!std::isfinite(a) || std::abs(a - az) > params.azimuth_tolerance_deg) continue;
      if (ra.at(r, c) > best) {
        best = ra.at(r, c);
        br = r;
        bc = c;
      }
    }
  }
  if (br < 0) return out;

  const Vec2 peak = to_cartesian(br * ra.range_bin_width_m, ra.azimuth_deg[bc]);
  state.offsets.push_back({peak.x - raw.x, peak.y - raw.y});
  while (static_cast<int>(state.offsets.size()) > params.offset_window) state.offsets.pop_front();
  out.region.center = peak;
  out.snapped = true;
  return out;
}

RefineResult refine_center(const OccupancyRegion& region, const RadarCube3D& cube, OffsetState& state,
                           const RefineParams& params) {
  const auto ra = range_azimuth_map(cube);
  return refine_center(region, ra, noise_floor(ra, params), state, params);
}

}  // namespace mmw
