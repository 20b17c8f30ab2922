#pragma once

// Export of transverse profiles: 8-bit binary graymaps for quick inspection
// and raw little-endian float64 grids with a key=value sidecar.

#include <filesystem>
#include <vector>

#include "vncs/vortex_projection.hpp"

namespace vncs {

// Intensity scaled so that the maximum maps to 255.
void write_intensity_pgm(const std::filesystem::path& path, const TransverseProfile& profile);

// Phase in (-pi, pi] mapped linearly onto 0..255.
void write_phase_pgm(const std::filesystem::path& path, const TransverseProfile& profile);

// Writes <stem>_intensity.f64, <stem>_phase.f64 and <stem>.txt; returns the paths written.
std::vector<std::filesystem::path> write_profile_raw(const std::filesystem::path& directory, const std::string& stem,
                                                     const TransverseProfile& profile,
                                                     const SuperpositionState& state);

unsigned char phase_to_gray(double phase);

}  // namespace vncs
