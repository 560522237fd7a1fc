#include "bec/nls.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "bec/simd.hpp"

namespace bec {

NlsModel::NlsModel(const Grid& grid) : spectral_(grid), symbols_(spectral_), engine_(spectral_) {
    const auto& abs2 = spectral_.frequency_abs2();
    u_inverse_.resize(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) u_inverse_[i] = abs2[i] > 0.0 ? 1.0 / u_symbol(abs2[i]) : 0.0;
}

WaveField NlsModel::background() const { return WaveField{ComplexField(spectral_.size(), Complex(1.0, 0.0)), 0.0}; }

double NlsModel::mass(const WaveField& w) const {
    return simd::kernels().norm_sq(w.psi.data(), w.psi.size()) * grid().cell_volume_r();
}

void NlsModel::step(WaveField& w, const RealField& W, double dt) const {
    spectral_.check_lattice(w.psi.size(), "nls step");
    spectral_.check_lattice(W.size(), "nls step potential");
    const auto half_phase = [&](ComplexField& psi) {
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -(std::norm(psi[i]) + W[i]) * 0.5 * dt);
    };
    half_phase(w.psi);
    ComplexField hat = spectral_.forward(std::move(w.psi));
    const auto& abs2 = spectral_.frequency_abs2();
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= std::polar(1.0, -abs2[i] * dt);
    w.psi = spectral_.inverse(std::move(hat));
    half_phase(w.psi);
    w.time += dt;
}

PerturbationViews NlsModel::to_views(const WaveField& w) const {
    spectral_.check_lattice(w.psi.size(), "perturbation views");
    PerturbationViews views;
    const std::size_t n = w.psi.size();
    views.u1.resize(n);
    views.u2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        views.u1[i] = w.psi[i].real() - 1.0;
        views.u2[i] = -w.psi[i].imag();
    }
    const RealField uu2 = real_part(apply_multiplier(spectral_, to_complex(views.u2), symbols_.u()));
    views.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) views.v[i] = Complex(views.u1[i], uu2[i]);
    return views;
}

WaveField NlsModel::from_perturbation(const RealField& u1, const RealField& u2, double time) const {
    spectral_.check_lattice(u1.size(), "perturbation");
    spectral_.check_lattice(u2.size(), "perturbation");
    WaveField w{ComplexField(u1.size()), time};
    for (std::size_t i = 0; i < u1.size(); ++i) w.psi[i] = Complex(1.0 + u1[i], -u2[i]);
    return w;
}

ComplexField NlsModel::apply_u_inverse(const ComplexField& f, const char* context) const {
    const Complex m = spectral_.mean(f);
    if (std::abs(m) > 1e-12)
        spdlog::warn("{}: U^-1 input has mean {:.3e}; the zero mode is dropped", context, std::abs(m));
    return apply_multiplier(spectral_, f, std::span<const double>(u_inverse_));
}

std::vector<ComplexField> NlsModel::j_weight(const ComplexField& f, double t) const {
    const Grid& g = grid();
    const ComplexField forward_prop = symbols_.h_propagator(-t); // e^{+itH}
    const ComplexField back_prop = symbols_.h_propagator(t);     // e^{-itH}
    const ComplexField moved = apply_multiplier(spectral_, f, std::span<const Complex>(forward_prop));
    std::vector<ComplexField> out;
    for (int a = 0; a < g.dim_r(); ++a) {
        ComplexField weighted(moved.size());
        for (std::size_t i = 0; i < moved.size(); ++i) weighted[i] = g.signed_position(i)[a] * moved[i];
        out.push_back(apply_multiplier(spectral_, weighted, std::span<const Complex>(back_prop)));
    }
    return out;
}

double NlsModel::x_norm(const ComplexField& z, double t) const {
    double jz2 = 0.0;
    for (const ComplexField& c : j_weight(z, t)) {
        const double h = spectral_.h1_norm(c);
        jz2 += h * h;
    }
    return spectral_.h1_norm(z) + std::sqrt(jz2);
}

double NlsModel::s_seminorm(const ComplexField& z) const {
    const Complex m = spectral_.mean(z);
    if (std::abs(m) > 1e-12)
        spdlog::warn("S seminorm: U^-1/6 input has mean {:.3e}; the zero mode is dropped", std::abs(m));
    const auto& abs2 = spectral_.frequency_abs2();
    const auto inv6 = symbols_.u_inv_sixth();
    RealField sym(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) sym[i] = std::sqrt(1.0 + abs2[i]) * inv6[i];
    const ComplexField g = apply_multiplier(spectral_, z, std::span<const double>(sym));
    double s = 0.0;
    for (const Complex& c : g) s += std::pow(std::norm(c), 3);
    return std::pow(s * grid().cell_volume_r(), 1.0 / 6.0);
}

double NlsModel::sup_norm(const RealField& f) const {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

} // namespace bec
