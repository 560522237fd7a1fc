#include "bec/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bec/simd.hpp"
#include "l2_operator.hpp"

namespace bec {

struct KineticModel::Faces : detail::MomentumFaces {};

KineticModel::KineticModel(const Grid& grid, double epsilon, L2Form form, L2SolverOptions solver)
    : spectral_(grid), symbols_(spectral_), weight_(grid, epsilon), form_(form), solver_(solver) {
    auto faces = std::make_shared<Faces>();
    static_cast<detail::MomentumFaces&>(*faces) = detail::build_faces(grid, weight_);
    faces_ = std::move(faces);
}

Equilibrium KineticModel::equilibrium(double mass) const {
    Equilibrium eq;
    eq.mass = mass;
    eq.density = mass / grid().volume_r();
    eq.f_inf = weight_.values();
    for (double& v : eq.f_inf) v *= eq.density;
    return eq;
}

PhaseSpaceField KineticModel::equilibrium_field(const Equilibrium& eq) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    PhaseSpaceField f;
    f.values.resize(nr * np);
    for (std::size_t r = 0; r < nr; ++r) std::copy(eq.f_inf.begin(), eq.f_inf.end(), f.values.begin() + r * np);
    return f;
}

RealField KineticModel::rho_moment(const PhaseSpaceField& f) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const auto& k = simd::kernels();
    RealField rho(nr);
    for (std::size_t r = 0; r < nr; ++r) rho[r] = k.sum(f.values.data() + r * np, np) * grid().cell_volume_p();
    return rho;
}

double KineticModel::mass(const PhaseSpaceField& f) const {
    return simd::kernels().sum(f.values.data(), f.values.size()) * grid().cell_volume_r() * grid().cell_volume_p();
}

double KineticModel::l_inner(const PhaseSpaceField& f, const PhaseSpaceField& g) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const double* inv = weight_.inverse().data();
    double s = 0.0;
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t j = 0; j < np; ++j) s += f.values[r * np + j] * g.values[r * np + j] * inv[j];
    return s * grid().cell_volume_r() * grid().cell_volume_p();
}

double KineticModel::l_norm(const PhaseSpaceField& f) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const auto& k = simd::kernels();
    double s = 0.0;
    for (std::size_t r = 0; r < nr; ++r) s += k.weighted_sum_sq(f.values.data() + r * np, weight_.inverse().data(), np);
    return std::sqrt(s * grid().cell_volume_r() * grid().cell_volume_p());
}

double KineticModel::l_norm_deviation(const PhaseSpaceField& f, const Equilibrium& eq) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const auto& k = simd::kernels();
    RealField g(np);
    double s = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t j = 0; j < np; ++j) g[j] = f.values[r * np + j] - eq.f_inf[j];
        s += k.weighted_sum_sq(g.data(), weight_.inverse().data(), np);
    }
    return std::sqrt(s * grid().cell_volume_r() * grid().cell_volume_p());
}

double KineticModel::grad_l_norm(const PhaseSpaceField& f) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    ComplexField hat = to_complex(f.values);
    spectral_.phase_space_fft().forward(hat.data());
    // Parseval per momentum node: sum_r |d f|^2 dr = (1/V) sum_zeta |zeta|^2 |f^|^2.
    const auto& zeta = spectral_.odd_frequencies();
    const double* inv = weight_.inverse().data();
    double s = 0.0;
    for (std::size_t m = 0; m < nr; ++m) {
        const double z2 = norm2(zeta[m]);
        if (z2 == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < np; ++j) row += std::norm(hat[m * np + j]) * inv[j];
        s += z2 * row;
    }
    return std::sqrt(s / grid().volume_r() * grid().cell_volume_p());
}

double KineticModel::l2_dissipation(const PhaseSpaceField& f, const Equilibrium& eq, const RealField* nc) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    RealField g(np);
    double s = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t j = 0; j < np; ++j) g[j] = f.values[r * np + j] - eq.f_inf[j];
        const double e = detail::stiffness_energy(*faces_, g.data());
        s += (nc ? (*nc)[r] : 1.0) * e;
    }
    return s * grid().cell_volume_r() * grid().cell_volume_p();
}

double KineticModel::min_value(const PhaseSpaceField& f) const {
    return *std::min_element(f.values.begin(), f.values.end());
}

double KineticModel::max_value(const PhaseSpaceField& f) const {
    return *std::max_element(f.values.begin(), f.values.end());
}

PhaseSpaceField KineticModel::apply_L1(const PhaseSpaceField& f) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const RealField rho = rho_moment(f);
    const RealField& e = weight_.values();
    PhaseSpaceField out{RealField(f.values.size()), f.time};
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t j = 0; j < np; ++j) out.values[r * np + j] = e[j] * rho[r] - f.values[r * np + j];
    return out;
}

PhaseSpaceField KineticModel::apply_L2(const PhaseSpaceField& f, const Equilibrium& eq) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    const RealField& pre = form_ == L2Form::divergence ? weight_.values() : weight_.inverse();
    PhaseSpaceField out{RealField(f.values.size()), f.time};
    RealField g(np), kg(np);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t j = 0; j < np; ++j) g[j] = f.values[r * np + j] - eq.f_inf[j];
        detail::apply_stiffness(*faces_, g.data(), kg.data());
        for (std::size_t j = 0; j < np; ++j) out.values[r * np + j] = -pre[j] * kg[j];
    }
    return out;
}

const ComplexField& KineticModel::phases(double dt) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = phase_cache_.find(dt);
    if (it == phase_cache_.end()) {
        if (phase_cache_.size() > 16) phase_cache_.clear();
        it = phase_cache_.emplace(dt, symbols_.transport_phases(dt)).first;
    }
    return it->second;
}

void KineticModel::transport_step(PhaseSpaceField& f, double dt) const {
    if (dt == 0.0) return;
    ComplexField hat = to_complex(f.values);
    const Fft& fft = spectral_.phase_space_fft();
    fft.forward(hat.data());
    simd::kernels().multiply(hat.data(), phases(dt).data(), hat.size());
    fft.inverse(hat.data());
    for (std::size_t i = 0; i < hat.size(); ++i) f.values[i] = hat[i].real();
    f.time += dt;
}

void KineticModel::collide_l1(double* f, double n_c, double dt) const {
    const std::size_t np = grid().momentum_size();
    const auto& k = simd::kernels();
    const double rho = k.sum(f, np) * grid().cell_volume_p();
    k.relax(f, weight_.values().data(), rho, std::exp(-n_c * dt), np);
}

void KineticModel::collide_l2(double* f, double n_c, double dt, const Equilibrium& eq) const {
    // M g' = -N_c K g for g = f - f_inf, with M = diag(E^{-1}) (divergence form)
    // or diag(E) (literal form).
    const std::size_t np = grid().momentum_size();
    const RealField& m = form_ == L2Form::divergence ? weight_.inverse() : weight_.values();
    RealField g(np), b(np);
    for (std::size_t j = 0; j < np; ++j) g[j] = f[j] - eq.f_inf[j];
    int it = 0;
    const auto solve = [&](double c) {
        it += detail::solve_shifted(*faces_, m, c, b.data(), g.data(), solver_.rel_tol, solver_.max_iterations);
    };
    if (solver_.scheme == L2Scheme::backward_euler) {
        // (M + dt N K) g_new = M g_old
        for (std::size_t j = 0; j < np; ++j) b[j] = m[j] * g[j];
        solve(dt * n_c);
    } else {
        // TR-BDF2 with gamma = 2 - sqrt(2); both stages share the matrix M + c K.
        const double gamma = 2.0 - std::sqrt(2.0);
        const double c = 0.5 * gamma * dt * n_c;
        const RealField g0 = g;
        RealField kg(np);
        detail::apply_stiffness(*faces_, g0.data(), kg.data());
        for (std::size_t j = 0; j < np; ++j) b[j] = m[j] * g0[j] - c * kg[j];
        solve(c);
        const double w1 = 1.0 / (gamma * (2.0 - gamma));
        const double w0 = (1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));
        for (std::size_t j = 0; j < np; ++j) b[j] = m[j] * (w1 * g[j] - w0 * g0[j]);
        solve(c);
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        l2_iterations_ += it;
    }
    for (std::size_t j = 0; j < np; ++j) f[j] = eq.f_inf[j] + g[j];
}

void KineticModel::collision_step(PhaseSpaceField& f, const RealField& nc, double dt, OperatorKind kind,
                                  const Equilibrium& eq) const {
    const std::size_t nr = grid().spatial_size();
    const std::size_t np = grid().momentum_size();
    if (nc.size() != nr) throw DimensionError("collision step: N_c has the wrong number of spatial nodes");
    check_coupling_positive(nc);
    for (std::size_t r = 0; r < nr; ++r) {
        double* row = f.values.data() + r * np;
        if (kind == OperatorKind::L1)
            collide_l1(row, nc[r], dt);
        else
            collide_l2(row, nc[r], dt, eq);
    }
}

void KineticModel::kinetic_step(PhaseSpaceField& f, const RealField& nc, double dt, OperatorKind kind,
                                const Equilibrium& eq) const {
    const double t0 = f.time;
    transport_step(f, 0.5 * dt);
    collision_step(f, nc, dt, kind, eq);
    transport_step(f, 0.5 * dt);
    f.time = t0 + dt;
}

void KineticModel::check_positivity(const PhaseSpaceField& f, double threshold) const {
    const double lo = min_value(f);
    const double hi = max_value(f);
    if (lo < -threshold * std::max(hi, 0.0))
        throw PositivityError("kinetic density lost positivity: min f = " + std::to_string(lo) +
                              ", max f = " + std::to_string(hi) + " at t = " + std::to_string(f.time));
}

long KineticModel::l2_iterations() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return l2_iterations_;
}

void check_coupling_positive(const RealField& nc) {
    for (std::size_t i = 0; i < nc.size(); ++i) {
        if (!(nc[i] > 0.0))
            throw CouplingPositivityError("N_c must be positive everywhere; N_c = " + std::to_string(nc[i]) +
                                          " at spatial node " + std::to_string(i));
    }
}

} // namespace bec
