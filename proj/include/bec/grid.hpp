#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "bec/common.hpp"

namespace bec {

/// Phase-space discretization: a periodic torus in r times a truncated box in p.
struct GridSpec {
    int dim_r = 1;
    int dim_p = 1;
    int n_r = 32;  ///< nodes per spatial axis (even)
    int n_p = 32;  ///< nodes per momentum axis (even)
    double length_r = 6.283185307179586;
    double p_max = 8.0;
    /// Offset of the first momentum node from -p_max. Defaults to half a cell,
    /// which keeps every node away from p = 0.
    std::optional<double> p_shift;
};

using Index3 = std::array<int, 3>;

class Grid {
public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int dim_r() const { return spec_.dim_r; }
    int dim_p() const { return spec_.dim_p; }
    int n_r() const { return spec_.n_r; }
    int n_p() const { return spec_.n_p; }
    double length_r() const { return spec_.length_r; }
    double p_max() const { return spec_.p_max; }
    double p_shift() const { return p_shift_; }

    std::size_t spatial_size() const { return spatial_size_; }
    std::size_t momentum_size() const { return momentum_size_; }
    std::size_t phase_size() const { return spatial_size_ * momentum_size_; }

    double dr() const { return spec_.length_r / spec_.n_r; }
    double dp() const { return 2.0 * spec_.p_max / spec_.n_p; }
    double cell_volume_r() const { return cell_r_; }
    double cell_volume_p() const { return cell_p_; }
    double volume_r() const { return cell_r_ * static_cast<double>(spatial_size_); }

    /// Per-axis node indices of a flat spatial index (row-major, axis 0 outermost).
    Index3 spatial_index(std::size_t flat) const { return unflatten(flat, spec_.dim_r, spec_.n_r); }
    Index3 momentum_index(std::size_t flat) const { return unflatten(flat, spec_.dim_p, spec_.n_p); }
    std::size_t spatial_flat(const Index3& idx) const { return flatten(idx, spec_.dim_r, spec_.n_r); }
    std::size_t momentum_flat(const Index3& idx) const { return flatten(idx, spec_.dim_p, spec_.n_p); }

    /// Node position in [0, L)^d.
    Vec3 position(std::size_t flat) const;
    /// Node position mapped to the centred cell [-L/2, L/2)^d.
    Vec3 signed_position(std::size_t flat) const;
    double momentum_coordinate(int node) const { return -spec_.p_max + p_shift_ + node * dp(); }
    Vec3 momentum(std::size_t flat) const;
    double min_abs_momentum() const;

    /// Signed integer wavenumber of a flat spectral index (FFT ordering).
    Index3 mode(std::size_t flat) const;
    /// Spatial frequency 2*pi*k/L of a flat spectral index.
    Vec3 frequency(std::size_t flat) const;
    /// Frequency used by odd symbols (derivatives, transport): Nyquist entries are zeroed
    /// so that real fields stay real.
    Vec3 odd_frequency(std::size_t flat) const;
    /// Flat spectral index for a signed mode, or nullopt if it lies outside the lattice.
    std::optional<std::size_t> mode_flat(const Index3& k) const;

    bool same_spatial_lattice(const Grid& other) const;

private:
    static Index3 unflatten(std::size_t flat, int dim, int n);
    static std::size_t flatten(const Index3& idx, int dim, int n);

    GridSpec spec_;
    double p_shift_ = 0.0;
    std::size_t spatial_size_ = 0;
    std::size_t momentum_size_ = 0;
    double cell_r_ = 0.0;
    double cell_p_ = 0.0;
};

} // namespace bec
