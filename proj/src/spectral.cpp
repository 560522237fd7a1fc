#include "bec/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bec/simd.hpp"

namespace bec {

struct Fft::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    ~Plans() {
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

Fft::Fft(int dim, int n, std::size_t batch, double cell_volume) : plans_(std::make_unique<Plans>()) {
    points_ = 1;
    int shape[3] = {n, n, n};
    for (int a = 0; a < dim; ++a) points_ *= static_cast<std::size_t>(n);
    batch_ = batch;
    forward_scale_ = cell_volume;
    inverse_scale_ = 1.0 / (cell_volume * static_cast<double>(points_));

    // FFTW_ESTIMATE never touches the planning buffer and yields the same plan
    // on every run; FFTW_UNALIGNED lets us execute on arbitrary vectors.
    std::vector<Complex> scratch(points_ * batch_);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int howmany = static_cast<int>(batch_);
    const int stride = static_cast<int>(batch_);
    plans_->forward =
        fftw_plan_many_dft(dim, shape, howmany, buf, nullptr, stride, 1, buf, nullptr, stride, 1, FFTW_FORWARD, flags);
    plans_->inverse =
        fftw_plan_many_dft(dim, shape, howmany, buf, nullptr, stride, 1, buf, nullptr, stride, 1, FFTW_BACKWARD, flags);
    if (!plans_->forward || !plans_->inverse) throw std::runtime_error("fft: planning failed");
}

Fft::~Fft() = default;

void Fft::forward(Complex* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_->forward, buf, buf);
    const std::size_t total = points_ * batch_;
    for (std::size_t i = 0; i < total; ++i) data[i] *= forward_scale_;
}

void Fft::inverse(Complex* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_->inverse, buf, buf);
    const std::size_t total = points_ * batch_;
    for (std::size_t i = 0; i < total; ++i) data[i] *= inverse_scale_;
}

Spectral::Spectral(const Grid& grid) : grid_(grid) {
    fft_ = std::make_shared<Fft>(grid.dim_r(), grid.n_r(), 1, grid.cell_volume_r());
    batched_ = std::make_shared<Fft>(grid.dim_r(), grid.n_r(), grid.momentum_size(), grid.cell_volume_r());
    const std::size_t n = grid.spatial_size();
    zeta_.resize(n);
    zeta_odd_.resize(n);
    zeta_abs2_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        zeta_[i] = grid.frequency(i);
        zeta_odd_[i] = grid.odd_frequency(i);
        zeta_abs2_[i] = norm2(zeta_[i]);
    }
}

void Spectral::check_lattice(std::size_t n, const char* what) const {
    if (n != size())
        throw DimensionError(std::string(what) + ": expected " + std::to_string(size()) + " lattice entries, got " +
                             std::to_string(n));
}

ComplexField Spectral::forward(ComplexField field) const {
    check_lattice(field.size(), "forward transform");
    fft_->forward(field.data());
    return field;
}

ComplexField Spectral::forward(const RealField& field) const { return forward(to_complex(field)); }

ComplexField Spectral::inverse(ComplexField spectrum) const {
    check_lattice(spectrum.size(), "inverse transform");
    fft_->inverse(spectrum.data());
    return spectrum;
}

Complex Spectral::mean(const ComplexField& field) const {
    check_lattice(field.size(), "mean");
    Complex s{0.0, 0.0};
    for (const Complex& z : field) s += z;
    return s / static_cast<double>(field.size());
}

double Spectral::integrate(const RealField& field) const {
    check_lattice(field.size(), "integrate");
    return simd::kernels().sum(field.data(), field.size()) * grid_.cell_volume_r();
}

double Spectral::l2_norm(const ComplexField& field) const {
    check_lattice(field.size(), "l2 norm");
    return std::sqrt(simd::kernels().norm_sq(field.data(), field.size()) * grid_.cell_volume_r());
}

double Spectral::l2_norm(const RealField& field) const {
    check_lattice(field.size(), "l2 norm");
    double s = 0.0;
    for (double x : field) s += x * x;
    return std::sqrt(s * grid_.cell_volume_r());
}

double Spectral::h1_norm(const ComplexField& field) const {
    const ComplexField hat = forward(field);
    double s = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) s += (1.0 + zeta_abs2_[i]) * std::norm(hat[i]);
    return std::sqrt(s / grid_.volume_r());
}

ComplexField apply_multiplier(const Spectral& spectral, const ComplexField& field, std::span<const Complex> symbol) {
    spectral.check_lattice(symbol.size(), "multiplier symbol");
    ComplexField hat = spectral.forward(field);
    simd::kernels().multiply(hat.data(), symbol.data(), hat.size());
    return spectral.inverse(std::move(hat));
}

ComplexField apply_multiplier(const Spectral& spectral, const ComplexField& field, std::span<const double> symbol) {
    spectral.check_lattice(symbol.size(), "multiplier symbol");
    ComplexField hat = spectral.forward(field);
    simd::kernels().scale(hat.data(), symbol.data(), hat.size());
    return spectral.inverse(std::move(hat));
}

RealField real_part(const ComplexField& field) {
    RealField out(field.size());
    std::transform(field.begin(), field.end(), out.begin(), [](const Complex& z) { return z.real(); });
    return out;
}

ComplexField to_complex(const RealField& field) { return ComplexField(field.begin(), field.end()); }

double kernel_symbol(KernelKind kind, int dim, double abs2) {
    if (kind == KernelKind::gaussian) return std::exp(-0.25 * abs2);
    return std::pow(1.0 + abs2, -0.5 * (dim + 1));
}

double kernel_mass(KernelKind kind, int dim) {
    if (kind == KernelKind::gaussian) return std::pow(std::numbers::pi, 0.5 * dim);
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 8.0 * std::numbers::pi;
    }
}

double kernel_tail_mass(KernelKind kind, int dim, double radius) {
    if (kind == KernelKind::gaussian) return boost::math::gamma_q(0.5 * dim, radius * radius);
    return boost::math::gamma_q(static_cast<double>(dim), radius);
}

SymbolTable::SymbolTable(const Spectral& spectral, KernelKind kernel) : spectral_(&spectral) {
    const auto& abs2 = spectral.frequency_abs2();
    const std::size_t n = abs2.size();
    const int dim = spectral.grid().dim_r();
    u_.resize(n);
    h_.resize(n);
    bracket_.resize(n);
    kernel_.resize(n);
    u_inv_sixth_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        u_[i] = u_symbol(abs2[i]);
        h_[i] = h_symbol(abs2[i]);
        bracket_[i] = bracket_symbol(abs2[i]);
        kernel_[i] = kernel_symbol(kernel, dim, abs2[i]);
        u_inv_sixth_[i] = u_[i] > 0.0 ? std::pow(u_[i], -1.0 / 6.0) : 0.0;
    }
}

ComplexField SymbolTable::h_propagator(double t) const {
    ComplexField out(h_.size());
    for (std::size_t i = 0; i < h_.size(); ++i) out[i] = std::polar(1.0, -t * h_[i]);
    return out;
}

ComplexField SymbolTable::transport_phases(double dt) const {
    const Grid& g = spectral_->grid();
    const std::size_t nr = g.spatial_size();
    const std::size_t np = g.momentum_size();
    const auto& zeta = spectral_->odd_frequencies();
    ComplexField out(nr * np);
    for (std::size_t m = 0; m < nr; ++m) {
        for (std::size_t j = 0; j < np; ++j) {
            const Vec3 p = g.momentum(j);
            double pz = 0.0;
            for (int a = 0; a < g.dim_r(); ++a) pz += p[a] * zeta[m][a];
            out[m * np + j] = std::polar(1.0, -pz * dt);
        }
    }
    return out;
}

double lp_cutoff(double s) {
    s = std::abs(s);
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double a = psi(2.0 - s);
    const double b = psi(s - 1.0);
    return a / (a + b);
}

double lp_annulus(double abs_zeta, double k) { return lp_cutoff(abs_zeta / k) - lp_cutoff(2.0 * abs_zeta / k); }

std::pair<double, double> lp_resolvable_range(const Spectral& spectral) {
    const auto& abs2 = spectral.frequency_abs2();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double a : abs2) {
        if (a <= 0.0) continue;
        lo = std::min(lo, std::sqrt(a));
        hi = std::max(hi, std::sqrt(a));
    }
    // sum_{k_lo <= k <= k_hi} chi^k = chi(|zeta|/k_hi) - chi(2|zeta|/k_lo), which is 1
    // whenever k_lo <= |zeta| <= k_hi.
    return {std::exp2(std::floor(std::log2(lo))), std::exp2(std::ceil(std::log2(hi)))};
}

ComplexField lp_project(const Spectral& spectral, const ComplexField& field, double k) {
    if (!(k > 0.0)) return ComplexField(field.size(), Complex{});
    const auto& abs2 = spectral.frequency_abs2();
    RealField symbol(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) symbol[i] = lp_annulus(std::sqrt(abs2[i]), k);
    return apply_multiplier(spectral, field, std::span<const double>(symbol));
}

std::pair<ComplexField, ComplexField> lp_split(const Spectral& spectral, const ComplexField& field, double k0) {
    // sum_{j < k0} chi^j telescopes to chi(2|zeta|/k0) away from zeta = 0.
    const auto& abs2 = spectral.frequency_abs2();
    RealField lo(abs2.size()), hi(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) {
        if (abs2[i] == 0.0) {
            lo[i] = hi[i] = 0.0;
            continue;
        }
        lo[i] = lp_cutoff(2.0 * std::sqrt(abs2[i]) / k0);
        hi[i] = 1.0 - lo[i];
    }
    return {apply_multiplier(spectral, field, std::span<const double>(lo)),
            apply_multiplier(spectral, field, std::span<const double>(hi))};
}

} // namespace bec
