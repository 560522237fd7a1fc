#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bec/common.hpp"
#include "bec/diagnostics.hpp"
#include "bec/grid.hpp"
#include "bec/kinetic.hpp"
#include "bec/nls.hpp"
#include "bec/spectral.hpp"

namespace bec {

struct CouplingOptions {
    double epsilon = 0.5; ///< weight regularization
    OperatorKind operator_kind = OperatorKind::L1;
    KernelKind kernel_kind = KernelKind::exponential;
    L2Form l2_form = L2Form::divergence;
    L2SolverOptions l2_solver{};
    double energy_delta = 0.05;          ///< delta of the perturbed energy channel
    double positivity_threshold = 1e-8;  ///< abort if min f < -threshold * max f
    bool track_positivity = true;
    /// Kinetic-only runs: N_c fixed to this constant and Psi left at its initial value.
    std::optional<double> frozen_nc;
};

struct CouplingState {
    PhaseSpaceField f;
    WaveField psi;
    RealField rho;
    RealField n_c;
    RealField v_pot; ///< V = rho - M/Vol
    RealField w_pot; ///< W = -1 - V
    double t = 0.0;
    double m_f0 = 0.0;
    long step_count = 0;
    DiagnosticsSeries series{standard_channels()};
};

/// Raised by the stepper when N_c loses positivity; carries the state at the
/// start of the failing step.
class CouplingAbort : public CouplingPositivityError {
public:
    CouplingAbort(const std::string& what, CouplingState snapshot)
        : CouplingPositivityError(what), snapshot_(std::make_shared<CouplingState>(std::move(snapshot))) {}
    const CouplingState& snapshot() const { return *snapshot_; }

private:
    std::shared_ptr<CouplingState> snapshot_;
};

class CouplingModel {
public:
    CouplingModel(const Grid& grid, const CouplingOptions& options);

    const Grid& grid() const { return kinetic_->grid(); }
    const CouplingOptions& options() const { return options_; }
    const KineticModel& kinetic() const { return *kinetic_; }
    const NlsModel& nls() const { return *nls_; }
    const Spectral& spectral() const { return nls_->spectral(); }

    /// C* (kernel * |Psi|^2) with the continuum kernel symbol on the torus lattice.
    RealField compute_nc(const WaveField& psi) const;
    /// Spectral gradient of N_c, one field per spatial axis.
    std::vector<RealField> grad_nc(const WaveField& psi) const;
    double grad_nc_sup(const WaveField& psi) const;
    /// Kernel mass outside the fundamental cell (bound on the periodization error).
    double periodization_error() const;

    std::pair<RealField, RealField> build_potentials(const RealField& rho, double m_f0) const;

    /// Builds a state with cached moments and the t = 0 diagnostics sample.
    CouplingState make_state(PhaseSpaceField f, WaveField psi) const;
    Equilibrium equilibrium(const CouplingState& s) const { return kinetic_->equilibrium(s.m_f0); }

    /// Symmetric splitting of the coupled system over [t, t + dt]:
    ///   kinetic half step with N_c[Psi(t)],
    ///   rho, V, W from the half-step kinetic field,
    ///   NLS step over dt with that W,
    ///   kinetic half step with N_c[Psi(t + dt)].
    void step(CouplingState& s, double dt, bool record = true) const;

    /// Appends one diagnostics row for the current state.
    void record(CouplingState& s) const;

    /// Same channel values as record() without appending.
    std::vector<double> sample(const CouplingState& s) const;

private:
    CouplingOptions options_;
    std::unique_ptr<KineticModel> kinetic_;
    std::unique_ptr<NlsModel> nls_;
    RealField kernel_;
    void refresh(CouplingState& s) const;
};

// Fixed-point construction mirroring F = F1 o F2.

struct PicardOptions {
    double horizon = 1.0;
    double dt = 0.05;
    int iterations = 6;
};

struct PicardResult {
    /// psi[k][n]: iterate k at time n dt; iterate 0 is Psi_0 held constant.
    std::vector<std::vector<WaveField>> psi;
    /// f of the last iterate at every time node.
    std::vector<PhaseSpaceField> f_last;
    /// d[k] = sup_n ||psi[k+1][n] - psi[k][n]||_{L^2}
    std::vector<double> d;
    bool contraction_warning = false;
};

/// Iterate k+1: kinetic solve over [0, T] with N_c built from iterate k (F1), then
/// NLS solve over [0, T] driven by rho of that kinetic solution (F2). Uses the same
/// discrete substeps as CouplingModel::step, so the fixed point is the stepped
/// trajectory.
PicardResult picard_iterate(const CouplingModel& model, const PhaseSpaceField& f0, const WaveField& psi0,
                            const PicardOptions& options);

/// Runs `steps` coupled steps and returns Psi at every time node (including t = 0).
std::vector<WaveField> stepped_trajectory(const CouplingModel& model, CouplingState state, double dt, int steps);

} // namespace bec
