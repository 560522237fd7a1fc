#pragma once

#include <filesystem>

#include "bec/common.hpp"
#include "bec/kinetic.hpp"
#include "bec/nls.hpp"

namespace bec {

/// Raw little-endian float64 array.
void write_f64_le(const std::filesystem::path& path, const double* data, std::size_t n);
RealField read_f64_le(const std::filesystem::path& path);

/// <stem>.bin holds f in row-major order (r axes outer, p axes inner);
/// <stem>.json records dims, spacings, time, mass and L-norm.
void write_phase_snapshot(const std::filesystem::path& stem, const KineticModel& kinetic, const PhaseSpaceField& f);

/// <stem>.bin holds interleaved (Re, Im) of Psi; <stem>.json records dims, time,
/// int |Psi|^2 and the sup norms of u1, u2.
void write_wave_snapshot(const std::filesystem::path& stem, const NlsModel& nls, const WaveField& w);

} // namespace bec
