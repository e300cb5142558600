#pragma once

#include <filesystem>
#include <iosfwd>

#include "tme/jsf_kernel.hpp"

namespace tme {

// Plain-text kernel format:
//   n_signal n_idler half_width_signal half_width_idler
//   re im            (n_signal * n_idler lines, signal-major)

/// Throws std::runtime_error on malformed input; grid and kernel
/// validation errors surface as std::invalid_argument.
JointSpectralAmplitude read_kernel(std::istream& in);
JointSpectralAmplitude read_kernel_file(const std::filesystem::path& path);

/// Writes scale_G * values so that reading the file back reproduces both
/// the normalized shape and the scale.
void write_kernel(std::ostream& out, const JointSpectralAmplitude& jsa);
void write_kernel_file(const std::filesystem::path& path, const JointSpectralAmplitude& jsa);

}  // namespace tme
