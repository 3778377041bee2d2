#include "mmwcarry/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "imaging_detail.hpp"

namespace mmw {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwfFree {
  void operator()(void* p) const { fftwf_free(p); }
};
using FftwBuffer = std::unique_ptr<fftwf_complex[], FftwfFree>;

FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<fftwf_complex*>(fftwf_malloc(sizeof(fftwf_complex) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

class Plan {
 public:
  explicit Plan(fftwf_plan p) : p_(p) {
    if (!p_) throw std::runtime_error("FFTW planning failed");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftwf_destroy_plan(p_);
  }
  // New-array execution is thread-safe; plans are created unaligned.
  void execute(fftwf_complex* buf) const { fftwf_execute_dft(p_, buf, buf); }

 private:
  fftwf_plan p_;
};

Plan plan_1d(int n) {
  auto buf = fftw_buffer(n);
  std::lock_guard lock(planner_mutex());
  return Plan(fftwf_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
}

// `howmany` interleaved length-n transforms along the slow axis of an
// n x howmany row-major block.
Plan plan_strided(int n, int howmany) {
  auto buf = fftw_buffer(static_cast<std::size_t>(n) * howmany);
  std::lock_guard lock(planner_mutex());
  return Plan(fftwf_plan_many_dft(1, &n, howmany, buf.get(), nullptr, howmany, 1, buf.get(), nullptr, howmany, 1,
                                  FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
}

}  // namespace

double RadarCube3D::azimuth_sine(int bin) const {
  const double f = static_cast<double>(bin - na_ / 2) / na_;
  const double s = f / pitch_h_;
  return std::abs(s) <= 1.0 ? s : std::nan("");
}

double RadarCube3D::azimuth_deg(int bin) const { return rad2deg(std::asin(azimuth_sine(bin))); }

double RadarCube3D::elevation_deg(int bin) const {
  const double f = static_cast<double>(bin - ne_ / 2) / ne_;
  const double s = f / pitch_v_;
  return std::abs(s) <= 1.0 ? rad2deg(std::asin(s)) : std::nan("");
}

int RadarCube3D::range_bin_of(double range_m) const {
  return static_cast<int>(std::lround(range_m / range_bin_width_));
}

int RadarCube3D::azimuth_bin_of(double azimuth_deg) const {
  const double f = std::sin(deg2rad(azimuth_deg)) * pitch_h_;
  const long k = std::lround(f * na_) + na_ / 2;
  return static_cast<int>(std::clamp<long>(k, 0, na_ - 1));
}

RangeAzimuthMap range_azimuth_map(const RadarCube3D& cube) {
  RangeAzimuthMap m;
  m.rows = cube.range_bins();
  m.cols = cube.azimuth_bins();
  m.range_bin_width_m = cube.range_bin_width_m();
  m.values.assign(static_cast<std::size_t>(m.rows) * m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    for (int a = 0; a < m.cols; ++a) {
      double s = 0.0;
      for (int e = 0; e < cube.elevation_bins(); ++e) s += cube(r, a, e);
      m.at(r, a) = s;
    }
  }
  for (int a = 0; a < m.cols; ++a) m.azimuth_deg.push_back(cube.azimuth_deg(a));
  return m;
}

RadarCube3D image_3d(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg, Window window) {
  detail::check_imaging_dims(cube, va, cfg);
  const DerivedSpecs spec = derive_specs(cfg);
  const int ns = cube.samples();
  const int nc = cube.chirps();
  const int nt = cube.tx();
  const int nr = cube.rx();
  const int na = cfg.azimuth_fft_size;
  const int ne = cfg.elevation_fft_size;
  const int streams = nc * nt * nr;

  const auto win = detail::make_window(window, ns);
  const Plan range_plan = plan_1d(ns);
  const Plan azimuth_plan = plan_strided(na, ne);

  // Range profiles laid out [chirp][tx][rx][range bin].
  auto profiles = fftw_buffer(static_cast<std::size_t>(streams) * ns);
  auto* prof = reinterpret_cast<std::complex<float>*>(profiles.get());
  const auto& src = cube.data();

#pragma omp parallel for schedule(static)
  for (int s = 0; s < streams; ++s) {
    auto* dst = prof + static_cast<std::size_t>(s) * ns;
    for (int n = 0; n < ns; ++n) {
      dst[n] = src[static_cast<std::size_t>(n) * streams + s] * static_cast<float>(win[n]);
    }
    range_plan.execute(reinterpret_cast<fftwf_complex*>(dst));
  }

  std::vector<float> inv_mult(va.multiplicity.size());
  for (std::size_t i = 0; i < inv_mult.size(); ++i) {
    inv_mult[i] = va.multiplicity[i] > 0 ? 1.0f / static_cast<float>(va.multiplicity[i]) : 0.0f;
  }

  // Elevation transform done directly: only n_v of the ne inputs are non-zero.
  const int nh = va.n_h;
  const int nv = va.n_v;
  std::vector<std::complex<float>> el_twiddle(static_cast<std::size_t>(ne) * nv);
  for (int e = 0; e < ne; ++e) {
    for (int v = 0; v < nv; ++v) {
      el_twiddle[static_cast<std::size_t>(e) * nv + v] =
          std::polar(1.0f, static_cast<float>(-2.0 * kPi * e * v / ne));
    }
  }

  RadarCube3D out(ns, na, ne, spec.range_bin_width_m, va.pitch_h, va.pitch_v);
  const std::size_t grid = static_cast<std::size_t>(na) * ne;

#pragma omp parallel
  {
    auto gbuf = fftw_buffer(grid);
    auto* g = reinterpret_cast<std::complex<float>*>(gbuf.get());
    std::vector<std::complex<float>> col(static_cast<std::size_t>(nh) * nv);
    std::vector<float> acc(grid);
#pragma omp for schedule(static)
    for (int k = 0; k < ns; ++k) {
      std::fill(acc.begin(), acc.end(), 0.0f);
      for (int c = 0; c < nc; ++c) {
        std::fill(col.begin(), col.end(), std::complex<float>{});
        for (const auto& e : va.elements) {
          const std::size_t s = (static_cast<std::size_t>(c) * nt + e.tx) * nr + e.rx;
          col[static_cast<std::size_t>(e.h) * nv + e.v] +=
              prof[s * ns + k] * inv_mult[static_cast<std::size_t>(e.v) * va.n_h + e.h];
        }
        for (int h = 0; h < nh; ++h) {
          const auto* x = &col[static_cast<std::size_t>(h) * nv];
          auto* row = g + static_cast<std::size_t>(h) * ne;
          for (int e = 0; e < ne; ++e) {
            const auto* tw = &el_twiddle[static_cast<std::size_t>(e) * nv];
            std::complex<float> sum{};
            for (int v = 0; v < nv; ++v) sum += x[v] * tw[v];
            row[e] = sum;
          }
        }
        std::fill(g + static_cast<std::size_t>(nh) * ne, g + grid, std::complex<float>{});
        azimuth_plan.execute(gbuf.get());
        for (std::size_t i = 0; i < grid; ++i) {
          const float re = g[i].real(), im = g[i].imag();
          acc[i] += std::sqrt(re * re + im * im);
        }
      }
      for (int a = 0; a < na; ++a) {
        const int as = (a + na / 2) % na;
        for (int el = 0; el < ne; ++el) {
          out(k, as, (el + ne / 2) % ne) = acc[static_cast<std::size_t>(a) * ne + el];
        }
      }
    }
  }
  return out;
}

float CroppedCube::peak() const { return *std::max_element(data.begin(), data.end()); }

CroppedCube crop_and_pad(const RadarCube3D& cube, const OccupancyRegion& region) {
  if (cube.elevation_bins() != CroppedCube::kElevation) {
    throw std::invalid_argument("crop expects a cube with 10 elevation bins");
  }
  const double range = std::hypot(region.center.x, region.center.y);
  const double az = rad2deg(std::atan2(region.center.x, region.center.y));
  const int rc = cube.range_bin_of(range);
  const double f = std::sin(deg2rad(az)) * cube.pitch_h();
  const long ac = std::lround(f * cube.azimuth_bins()) + cube.azimuth_bins() / 2;
  if (rc < 0 || rc >= cube.range_bins() || ac < 0 || ac >= cube.azimuth_bins()) {
    throw std::out_of_range("crop center outside radar cube");
  }
  CroppedCube cc;
  cc.center_range_m = range;
  cc.center_azimuth_deg = az;
  const int r0 = rc - CroppedCube::kRange / 2;
  const int a0 = static_cast<int>(ac) - CroppedCube::kAzimuth / 2;
  for (int i = 0; i < CroppedCube::kRange; ++i) {
    const int r = r0 + i;
    if (r < 0 || r >= cube.range_bins()) continue;
    for (int j = 0; j < CroppedCube::kAzimuth; ++j) {
      const int a = a0 + j;
      if (a < 0 || a >= cube.azimuth_bins()) continue;
      for (int e = 0; e < CroppedCube::kElevation; ++e) cc(i, j, e) = cube(r, a, e);
    }
  }
  return cc;
}

CroppedCube range_compensate(CroppedCube cc) {
  if (!(cc.center_range_m > 0.0)) throw std::invalid_argument("range compensation needs a positive range");
  const auto gain = static_cast<float>(cc.center_range_m * cc.center_range_m);
  for (auto& v : cc.data) v *= gain;
  return cc;
}

}  // namespace mmw
