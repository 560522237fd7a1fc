#include "bec/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

namespace bec {

CouplingModel::CouplingModel(const Grid& grid, const CouplingOptions& options)
    : options_(options),
      kinetic_(std::make_unique<KineticModel>(grid, options.epsilon, options.l2_form, options.l2_solver)),
      nls_(std::make_unique<NlsModel>(grid)) {
    const auto& abs2 = nls_->spectral().frequency_abs2();
    kernel_.resize(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) kernel_[i] = kernel_symbol(options.kernel_kind, grid.dim_r(), abs2[i]);
}

RealField CouplingModel::compute_nc(const WaveField& psi) const {
    RealField dens(psi.psi.size());
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(psi.psi[i]);
    return real_part(apply_multiplier(spectral(), to_complex(dens), std::span<const double>(kernel_)));
}

std::vector<RealField> CouplingModel::grad_nc(const WaveField& psi) const {
    const Spectral& sp = spectral();
    RealField dens(psi.psi.size());
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(psi.psi[i]);
    const ComplexField hat = sp.forward(dens);
    const auto& zeta = sp.odd_frequencies();
    std::vector<RealField> out;
    for (int a = 0; a < grid().dim_r(); ++a) {
        ComplexField d(hat.size());
        for (std::size_t i = 0; i < hat.size(); ++i) d[i] = Complex(0.0, zeta[i][a]) * kernel_[i] * hat[i];
        out.push_back(real_part(sp.inverse(std::move(d))));
    }
    return out;
}

double CouplingModel::grad_nc_sup(const WaveField& psi) const {
    const auto g = grad_nc(psi);
    double m = 0.0;
    for (std::size_t i = 0; i < g[0].size(); ++i) {
        double s = 0.0;
        for (const RealField& c : g) s += c[i] * c[i];
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

double CouplingModel::periodization_error() const {
    return kernel_tail_mass(options_.kernel_kind, grid().dim_r(), 0.5 * grid().length_r());
}

std::pair<RealField, RealField> CouplingModel::build_potentials(const RealField& rho, double m_f0) const {
    const double background = m_f0 / grid().volume_r();
    RealField v(rho.size()), w(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        v[i] = rho[i] - background;
        w[i] = -1.0 - v[i];
    }
    return {std::move(v), std::move(w)};
}

void CouplingModel::refresh(CouplingState& s) const {
    s.rho = kinetic_->rho_moment(s.f);
    auto [v, w] = build_potentials(s.rho, s.m_f0);
    s.v_pot = std::move(v);
    s.w_pot = std::move(w);
    if (options_.frozen_nc) s.n_c.assign(s.rho.size(), *options_.frozen_nc);
    else s.n_c = compute_nc(s.psi);
}

CouplingState CouplingModel::make_state(PhaseSpaceField f, WaveField psi) const {
    if (f.values.size() != grid().phase_size()) throw DimensionError("coupling: kinetic field has the wrong size");
    spectral().check_lattice(psi.psi.size(), "coupling wave field");
    CouplingState s;
    s.m_f0 = kinetic_->mass(f);
    s.f = std::move(f);
    s.psi = std::move(psi);
    s.t = 0.0;
    s.f.time = s.psi.time = 0.0;
    refresh(s);
    record(s);
    return s;
}

std::vector<double> CouplingModel::sample(const CouplingState& s) const {
    const Equilibrium eq = equilibrium(s);
    const Spectral& sp = spectral();
    RealField rho_dev(s.rho.size());
    for (std::size_t i = 0; i < rho_dev.size(); ++i) rho_dev[i] = s.rho[i] - eq.density;
    double sup1 = 0.0, sup2 = 0.0;
    for (const Complex& z : s.psi.psi) {
        sup1 = std::max(sup1, std::abs(z.real() - 1.0));
        sup2 = std::max(sup2, std::abs(z.imag()));
    }
    PhaseSpaceField g = s.f;
    const std::size_t np = grid().momentum_size();
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= eq.f_inf[i % np];
    return {
        kinetic_->mass(s.f),
        nls_->mass(s.psi),
        kinetic_->l_norm(g),
        kinetic_->grad_l_norm(s.f),
        sp.l2_norm(rho_dev),
        sup1,
        sup2,
        *std::min_element(s.n_c.begin(), s.n_c.end()),
        *std::max_element(s.n_c.begin(), s.n_c.end()),
        options_.frozen_nc ? 0.0 : grad_nc_sup(s.psi),
        perturbed_energy(*kinetic_, g, options_.energy_delta).total,
    };
}

void CouplingModel::record(CouplingState& s) const { s.series.append(s.t, sample(s)); }

void CouplingModel::step(CouplingState& s, double dt, bool record_sample) const {
    const Equilibrium eq = equilibrium(s);
    const auto guard = [&](const RealField& nc, const char* when) {
        try {
            check_coupling_positive(nc);
        } catch (const CouplingPositivityError& e) {
            throw CouplingAbort(std::string(e.what()) + " (" + when + ", step " + std::to_string(s.step_count) +
                                    ", t = " + std::to_string(s.t) + ")",
                                s);
        }
    };
    guard(s.n_c, "start of step");
    if (options_.frozen_nc) {
        kinetic_->kinetic_step(s.f, s.n_c, dt, options_.operator_kind, eq);
    } else {
        kinetic_->kinetic_step(s.f, s.n_c, 0.5 * dt, options_.operator_kind, eq);
        const auto [v_half, w_half] = build_potentials(kinetic_->rho_moment(s.f), s.m_f0);
        nls_->step(s.psi, w_half, dt);
        const RealField nc_end = compute_nc(s.psi);
        guard(nc_end, "after the wave substep");
        kinetic_->kinetic_step(s.f, nc_end, 0.5 * dt, options_.operator_kind, eq);
    }

    s.t += dt;
    ++s.step_count;
    s.f.time = s.psi.time = s.t;
    refresh(s);
    if (options_.track_positivity) kinetic_->check_positivity(s.f, options_.positivity_threshold);
    if (record_sample) record(s);
}

PicardResult picard_iterate(const CouplingModel& model, const PhaseSpaceField& f0, const WaveField& psi0,
                            const PicardOptions& options) {
    if (!(options.dt > 0.0) || !(options.horizon > 0.0)) throw std::invalid_argument("picard: dt and horizon must be positive");
    const int steps = static_cast<int>(std::lround(options.horizon / options.dt));
    const KineticModel& kin = model.kinetic();
    const NlsModel& nls = model.nls();
    const double m_f0 = kin.mass(f0);
    const Equilibrium eq = kin.equilibrium(m_f0);
    const OperatorKind kind = model.options().operator_kind;
    const double dt = options.dt;

    PicardResult result;
    result.psi.emplace_back(static_cast<std::size_t>(steps + 1), psi0);
    for (int k = 1; k <= options.iterations; ++k) {
        const auto& prev = result.psi.back();
        // F1: kinetic solve driven by the previous wave trajectory.
        PhaseSpaceField f = f0;
        f.time = 0.0;
        std::vector<RealField> w_half(static_cast<std::size_t>(steps));
        std::vector<PhaseSpaceField> f_traj{f};
        for (int n = 0; n < steps; ++n) {
            kin.kinetic_step(f, model.compute_nc(prev[n]), 0.5 * dt, kind, eq);
            w_half[n] = model.build_potentials(kin.rho_moment(f), m_f0).second;
            kin.kinetic_step(f, model.compute_nc(prev[n + 1]), 0.5 * dt, kind, eq);
            f_traj.push_back(f);
        }
        // F2: wave solve driven by that kinetic trajectory.
        std::vector<WaveField> next{psi0};
        next.front().time = 0.0;
        for (int n = 0; n < steps; ++n) {
            WaveField w = next.back();
            nls.step(w, w_half[n], dt);
            next.push_back(std::move(w));
        }
        double d = 0.0;
        for (int n = 0; n <= steps; ++n) {
            ComplexField diff(next[n].psi.size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = next[n].psi[i] - prev[n].psi[i];
            d = std::max(d, model.spectral().l2_norm(diff));
        }
        result.d.push_back(d);
        result.psi.push_back(std::move(next));
        result.f_last = std::move(f_traj);
    }
    const double floor = 1e-13 * std::max(1.0, result.d.empty() ? 0.0 : result.d.front());
    for (std::size_t k = 3; k < result.d.size(); ++k) {
        if (result.d[k] >= result.d[k - 1] && result.d[k] > floor) {
            result.contraction_warning = true;
            spdlog::warn("picard: d_{} = {:.3e} did not decrease (d_{} = {:.3e}); data too large or horizon too long", k,
                         result.d[k], k - 1, result.d[k - 1]);
            break;
        }
    }
    return result;
}

std::vector<WaveField> stepped_trajectory(const CouplingModel& model, CouplingState state, double dt, int steps) {
    std::vector<WaveField> out{state.psi};
    for (int n = 0; n < steps; ++n) {
        model.step(state, dt, false);
        out.push_back(state.psi);
    }
    return out;
}

} // namespace bec
