#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmwcarry/imaging.hpp"

namespace mmw {

namespace {

constexpr double kGridTol = 1e-6;

// Smallest positive spacing between distinct sorted coordinates; the grid
// pitch when every gap is an integer multiple of it.
double grid_pitch(std::vector<double> coords, double fallback) {
  std::sort(coords.begin(), coords.end());
  double pitch = 0.0;
  for (std::size_t i = 1; i < coords.size(); ++i) {
    const double d = coords[i] - coords[i - 1];
    if (d > kGridTol && (pitch == 0.0 || d < pitch)) pitch = d;
  }
  if (pitch == 0.0) return fallback;
  for (double c : coords) {
    const double k = (c - coords.front()) / pitch;
    if (std::abs(k - std::round(k)) > 1e-3) {
      throw std::invalid_argument("virtual array coordinates do not lie on a uniform grid");
    }
  }
  return pitch;
}

}  // namespace

VirtualArray form_virtual_array(std::span<const AntennaPosition> tx, std::span<const AntennaPosition> rx) {
  if (tx.empty() || rx.empty()) throw std::invalid_argument("tx and rx lists must be non-empty");
  VirtualArray va;
  va.n_rx = static_cast<int>(rx.size());
  std::vector<double> xs, zs;
  for (int t = 0; t < static_cast<int>(tx.size()); ++t) {
    for (int r = 0; r < static_cast<int>(rx.size()); ++r) {
      VirtualElement e;
      e.x = tx[t].x + rx[r].x;
      e.z = tx[t].z + rx[r].z;
      e.tx = t;
      e.rx = r;
      va.elements.push_back(e);
      xs.push_back(e.x);
      zs.push_back(e.z);
    }
  }
  va.pitch_h = grid_pitch(xs, 0.5);
  va.pitch_v = grid_pitch(zs, 1.0);
  const double x0 = *std::min_element(xs.begin(), xs.end());
  const double z0 = *std::min_element(zs.begin(), zs.end());
  for (auto& e : va.elements) {
    e.h = static_cast<int>(std::lround((e.x - x0) / va.pitch_h));
    e.v = static_cast<int>(std::lround((e.z - z0) / va.pitch_v));
    va.n_h = std::max(va.n_h, e.h + 1);
    va.n_v = std::max(va.n_v, e.v + 1);
  }
  va.multiplicity.assign(static_cast<std::size_t>(va.n_h) * va.n_v, 0);
  for (const auto& e : va.elements) {
    if (++va.multiplicity[static_cast<std::size_t>(e.v) * va.n_h + e.h] > 1) va.has_duplicates = true;
  }
  return va;
}

}  // namespace mmw
