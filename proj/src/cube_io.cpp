#include "mmwcarry/cube_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mmw {

namespace {

static_assert(std::endian::native == std::endian::little, "cube I/O assumes a little-endian host");

constexpr char kMagic[4] = {'M', 'M', 'W', 'C'};

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

void write_header(std::ostream& out, const CubeHeader& h) {
  out.write(kMagic, 4);
  put_u32(out, h.version);
  put_u32(out, h.flags);
  put_u32(out, h.rank);
  for (auto d : h.dims) put_u32(out, d);
}

CubeHeader parse_header(std::istream& in, const std::filesystem::path& path) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a cube file: " + path.string());
  CubeHeader h;
  h.version = get_u32(in);
  h.flags = get_u32(in);
  h.rank = get_u32(in);
  for (auto& d : h.dims) d = get_u32(in);
  if (!in) throw std::runtime_error("truncated cube header: " + path.string());
  if (h.version != 1) throw std::runtime_error("unsupported cube version in " + path.string());
  return h;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

void write_if_cube(const std::filesystem::path& path, const IFCube4D& cube) {
  auto out = open_out(path);
  CubeHeader h;
  h.rank = 4;
  h.dims = {static_cast<std::uint32_t>(cube.samples()), static_cast<std::uint32_t>(cube.chirps()),
            static_cast<std::uint32_t>(cube.tx()), static_cast<std::uint32_t>(cube.rx())};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(cube.data().data()),
            static_cast<std::streamsize>(cube.data().size() * sizeof(std::complex<float>)));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

IFCube4D read_if_cube(const std::filesystem::path& path) {
  auto in = open_in(path);
  const CubeHeader h = parse_header(in, path);
  if (h.rank != 4 || (h.flags & kMagnitudeFlag)) throw std::runtime_error("not an IF cube: " + path.string());
  IFCube4D cube(static_cast<int>(h.dims[0]), static_cast<int>(h.dims[1]), static_cast<int>(h.dims[2]),
                static_cast<int>(h.dims[3]));
  in.read(reinterpret_cast<char*>(cube.data().data()),
          static_cast<std::streamsize>(cube.data().size() * sizeof(std::complex<float>)));
  if (!in) throw std::runtime_error("truncated IF cube: " + path.string());
  return cube;
}

void write_radar_cube(const std::filesystem::path& path, const RadarCube3D& cube) {
  auto out = open_out(path);
  CubeHeader h;
  h.flags = kMagnitudeFlag;
  h.rank = 3;
  h.dims = {static_cast<std::uint32_t>(cube.range_bins()), static_cast<std::uint32_t>(cube.azimuth_bins()),
            static_cast<std::uint32_t>(cube.elevation_bins()), 1};
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(cube.data().data()),
            static_cast<std::streamsize>(cube.data().size() * sizeof(float)));
  const double footer[3] = {cube.range_bin_width_m(), cube.pitch_h(), cube.pitch_v()};
  out.write(reinterpret_cast<const char*>(footer), sizeof(footer));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RadarCube3D read_radar_cube(const std::filesystem::path& path) {
  auto in = open_in(path);
  const CubeHeader h = parse_header(in, path);
  if (h.rank != 3 || !(h.flags & kMagnitudeFlag)) throw std::runtime_error("not a magnitude cube: " + path.string());
  std::vector<float> cells(static_cast<std::size_t>(h.dims[0]) * h.dims[1] * h.dims[2]);
  in.read(reinterpret_cast<char*>(cells.data()), static_cast<std::streamsize>(cells.size() * sizeof(float)));
  double footer[3] = {1.0, 0.5, 1.0};
  in.read(reinterpret_cast<char*>(footer), sizeof(footer));
  if (!in) throw std::runtime_error("truncated magnitude cube: " + path.string());
  RadarCube3D cube(static_cast<int>(h.dims[0]), static_cast<int>(h.dims[1]), static_cast<int>(h.dims[2]), footer[0],
                   footer[1], footer[2]);
  cube.data() = std::move(cells);
  return cube;
}

CubeHeader read_cube_header(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_header(in, path);
}

}  // namespace mmw
