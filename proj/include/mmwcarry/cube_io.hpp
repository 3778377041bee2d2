#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "mmwcarry/imaging.hpp"
#include "mmwcarry/scene_sim.hpp"

namespace mmw {

// Binary cube dump, little-endian:
//   bytes  0..3   magic "MMWC"
//   bytes  4..7   u32 version (1)
//   bytes  8..11  u32 flags: bit 0 set = magnitude-only float32 cells,
//                 clear = complex float32 (re, im) interleaved
//   bytes 12..15  u32 rank (4 for IF cubes, 3 for magnitude cubes)
//   bytes 16..31  u32 dims[4] (unused trailing dims are 1)
// followed by the cells in row-major order of the dims. Magnitude cubes
// end with a 24-byte footer of three float64 axis scales: range bin width
// (m), horizontal and vertical virtual-array pitch (wavelengths).
struct CubeHeader {
  std::uint32_t version = 1;
  std::uint32_t flags = 0;
  std::uint32_t rank = 0;
  std::array<std::uint32_t, 4> dims{1, 1, 1, 1};
};

inline constexpr std::uint32_t kMagnitudeFlag = 1u;

void write_if_cube(const std::filesystem::path& path, const IFCube4D& cube);
IFCube4D read_if_cube(const std::filesystem::path& path);

void write_radar_cube(const std::filesystem::path& path, const RadarCube3D& cube);
RadarCube3D read_radar_cube(const std::filesystem::path& path);

CubeHeader read_cube_header(const std::filesystem::path& path);

}  // namespace mmw
