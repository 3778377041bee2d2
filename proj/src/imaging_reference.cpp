// Serial reference for image_3d. Direct DFTs in double precision; kept for
// testing and benchmarking the parallel FFTW kernel.
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "imaging_detail.hpp"
#include "mmwcarry/imaging.hpp"

namespace mmw {

namespace detail {

std::vector<double> make_window(Window w, int n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::hann && n > 1) {
    for (int i = 0; i < n; ++i) out[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
  }
  return out;
}

void check_imaging_dims(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg) {
  const int nt = static_cast<int>(cfg.tx_positions.size());
  const int nr = static_cast<int>(cfg.rx_positions.size());
  if (cube.samples() != cfg.samples_per_chirp || cube.chirps() != cfg.chirps_per_frame || cube.tx() != nt ||
      cube.rx() != nr) {
    throw std::invalid_argument("IF cube dims (" + std::to_string(cube.samples()) + "," +
                                std::to_string(cube.chirps()) + "," + std::to_string(cube.tx()) + "," +
                                std::to_string(cube.rx()) + ") do not match radar config");
  }
  if (static_cast<int>(va.elements.size()) != nt * nr || va.n_rx != nr) {
    throw std::invalid_argument("virtual array does not match radar config");
  }
  if (va.n_h > cfg.azimuth_fft_size || va.n_v > cfg.elevation_fft_size) {
    throw std::invalid_argument("angle FFT sizes smaller than the virtual grid");
  }
}

}  // namespace detail

namespace {

std::vector<std::complex<double>> twiddles(int n) {
  std::vector<std::complex<double>> t(n);
  for (int k = 0; k < n; ++k) t[k] = std::polar(1.0, -2.0 * kPi * k / n);
  return t;
}

}  // namespace

RadarCube3D image_3d_reference(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg,
                               Window window) {
  detail::check_imaging_dims(cube, va, cfg);
  const DerivedSpecs spec = derive_specs(cfg);
  const int ns = cube.samples();
  const int nc = cube.chirps();
  const int na = cfg.azimuth_fft_size;
  const int ne = cfg.elevation_fft_size;
  const auto win = detail::make_window(window, ns);
  const auto tw_r = twiddles(ns);
  const auto tw_a = twiddles(na);
  const auto tw_e = twiddles(ne);

  RadarCube3D out(ns, na, ne, spec.range_bin_width_m, va.pitch_h, va.pitch_v);
  std::vector<double> acc(static_cast<std::size_t>(ns) * na * ne, 0.0);

  std::vector<std::complex<double>> profile(static_cast<std::size_t>(va.elements.size()) * ns);
  std::vector<std::complex<double>> grid(static_cast<std::size_t>(va.n_h) * va.n_v);
  std::vector<std::complex<double>> az(static_cast<std::size_t>(na) * va.n_v);

  for (int c = 0; c < nc; ++c) {
    for (std::size_t i = 0; i < va.elements.size(); ++i) {
      const auto& el = va.elements[i];
      for (int k = 0; k < ns; ++k) {
        std::complex<double> s{};
        for (int n = 0; n < ns; ++n) {
          s += std::complex<double>(cube(n, c, el.tx, el.rx)) * win[n] *
               tw_r[(static_cast<long>(k) * n) % ns];
        }
        profile[i * ns + k] = s;
      }
    }
    for (int k = 0; k < ns; ++k) {
      std::fill(grid.begin(), grid.end(), std::complex<double>{});
      for (std::size_t i = 0; i < va.elements.size(); ++i) {
        const auto& el = va.elements[i];
        const std::size_t cell = static_cast<std::size_t>(el.v) * va.n_h + el.h;
        grid[cell] += profile[i * ns + k] / static_cast<double>(va.multiplicity[cell]);
      }
      for (int a = 0; a < na; ++a) {
        for (int v = 0; v < va.n_v; ++v) {
          std::complex<double> s{};
          for (int h = 0; h < va.n_h; ++h) {
            s += grid[static_cast<std::size_t>(v) * va.n_h + h] * tw_a[(static_cast<long>(a) * h) % na];
          }
          az[static_cast<std::size_t>(a) * va.n_v + v] = s;
        }
      }
      for (int a = 0; a < na; ++a) {
        for (int e = 0; e < ne; ++e) {
          std::complex<double> s{};
          for (int v = 0; v < va.n_v; ++v) {
            s += az[static_cast<std::size_t>(a) * va.n_v + v] * tw_e[(static_cast<long>(e) * v) % ne];
          }
          const int as = (a + na / 2) % na;
          const int es = (e + ne / 2) % ne;
          acc[(static_cast<std::size_t>(k) * na + as) * ne + es] += std::abs(s);
        }
      }
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) out.data()[i] = static_cast<float>(acc[i]);
  return out;
}

}  // namespace mmw
