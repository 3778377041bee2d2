#pragma once

#include <vector>

#include "mmwcarry/imaging.hpp"

namespace mmw::detail {

std::vector<double> make_window(Window w, int n);
void check_imaging_dims(const IFCube4D& cube, const VirtualArray& va, const RadarConfig& cfg);

}  // namespace mmw::detail
