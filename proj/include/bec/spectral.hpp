#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>

#include "bec/common.hpp"
#include "bec/grid.hpp"

namespace bec {

/// In-place multidimensional DFT over n^dim nodes, applied to `batch`
/// interleaved fields (element stride = batch). Forward carries the cell
/// volume, inverse carries 1/volume, matching the continuum convention
///   f^(zeta) = int f(r) e^{-i r.zeta} dr.
class Fft {
public:
    Fft(int dim, int n, std::size_t batch, double cell_volume);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(Complex* data) const;
    void inverse(Complex* data) const;
    std::size_t points() const { return points_; }
    std::size_t batch() const { return batch_; }

private:
    struct Plans;
    std::unique_ptr<Plans> plans_;
    std::size_t points_ = 0;
    std::size_t batch_ = 0;
    double forward_scale_ = 1.0;
    double inverse_scale_ = 1.0;
};

/// Transforms and frequency tables for the spatial torus of a Grid.
class Spectral {
public:
    explicit Spectral(const Grid& grid);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.spatial_size(); }

    ComplexField forward(ComplexField field) const;
    ComplexField forward(const RealField& field) const;
    ComplexField inverse(ComplexField spectrum) const;

    /// Batched transform over the spatial axes of a phase-space array
    /// (r outer, p inner).
    const Fft& phase_space_fft() const { return *batched_; }

    const std::vector<Vec3>& frequencies() const { return zeta_; }
    const RealField& frequency_abs2() const { return zeta_abs2_; }
    const std::vector<Vec3>& odd_frequencies() const { return zeta_odd_; }

    /// Spatial mean (zero mode / volume).
    Complex mean(const ComplexField& field) const;
    double integrate(const RealField& field) const;
    /// (sum |f|^2 dr)^{1/2}
    double l2_norm(const ComplexField& field) const;
    double l2_norm(const RealField& field) const;
    /// Spectral H^1 norm: ((1/V) sum (1+|zeta|^2) |f^|^2)^{1/2}.
    double h1_norm(const ComplexField& field) const;

    void check_lattice(std::size_t n, const char* what) const;

private:
    Grid grid_;
    std::shared_ptr<Fft> fft_;
    std::shared_ptr<Fft> batched_;
    std::vector<Vec3> zeta_;
    std::vector<Vec3> zeta_odd_;
    RealField zeta_abs2_;
};

ComplexField apply_multiplier(const Spectral& spectral, const ComplexField& field, std::span<const Complex> symbol);
ComplexField apply_multiplier(const Spectral& spectral, const ComplexField& field, std::span<const double> symbol);

RealField real_part(const ComplexField& field);
ComplexField to_complex(const RealField& field);

// Scalar symbols on a single frequency.

/// <zeta> = sqrt(2 + |zeta|^2)
inline double bracket_symbol(double abs2) { return std::sqrt(2.0 + abs2); }
/// U(zeta) = |zeta| / <zeta>
inline double u_symbol(double abs2) { return std::sqrt(abs2) / std::sqrt(2.0 + abs2); }
/// H(zeta) = |zeta| <zeta>
inline double h_symbol(double abs2) { return std::sqrt(abs2) * std::sqrt(2.0 + abs2); }

enum class KernelKind { exponential, gaussian };

/// Fourier symbol of the unit-mass mollifier used for N_c on R^dim:
/// exponential e^{-|r|}: (1+|zeta|^2)^{-(dim+1)/2}; gaussian e^{-|r|^2}: e^{-|zeta|^2/4}.
double kernel_symbol(KernelKind kind, int dim, double abs2);
/// Unnormalized kernel mass on R^dim (the inverse of the normalization constant C*).
double kernel_mass(KernelKind kind, int dim);
/// Kernel mass outside the ball of radius R (upper bound for the mass outside the
/// fundamental cell when R = L/2); reported as the periodization error.
double kernel_tail_mass(KernelKind kind, int dim, double radius);

/// Immutable symbol tables on the discrete frequency lattice.
class SymbolTable {
public:
    explicit SymbolTable(const Spectral& spectral, KernelKind kernel = KernelKind::exponential);

    std::span<const double> u() const { return u_; }
    std::span<const double> h() const { return h_; }
    std::span<const double> bracket() const { return bracket_; }
    std::span<const double> nc_kernel() const { return kernel_; }
    /// U^{-1/6} with the zero-frequency entry set to 0.
    std::span<const double> u_inv_sixth() const { return u_inv_sixth_; }
    /// exp(-i t H) per mode.
    ComplexField h_propagator(double t) const;
    /// exp(-i (p . zeta) dt) for every (mode, momentum node), mode-major; uses
    /// the first dim_r momentum components and odd frequencies.
    ComplexField transport_phases(double dt) const;

private:
    const Spectral* spectral_;
    RealField u_, h_, bracket_, kernel_, u_inv_sixth_;
};

// Littlewood-Paley machinery.

/// Smooth cutoff: 1 on [0,1], 0 on [2,inf), C-infinity and monotone between, built
/// from psi(t) = exp(-1/t): chi(s) = psi(2-s) / (psi(2-s) + psi(s-1)).
double lp_cutoff(double s);
/// chi^k(zeta) = chi(|zeta|/k) - chi(2|zeta|/k)
double lp_annulus(double abs_zeta, double k);
/// Dyadic scales [k_lo, k_hi] whose annuli cover every nonzero lattice frequency.
std::pair<double, double> lp_resolvable_range(const Spectral& spectral);
ComplexField lp_project(const Spectral& spectral, const ComplexField& field, double k);
/// (f_{<k0}, f_{>=k0}); the two parts sum to the field minus its mean.
std::pair<ComplexField, ComplexField> lp_split(const Spectral& spectral, const ComplexField& field, double k0);

} // namespace bec
