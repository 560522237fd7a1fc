#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "bec/config.hpp"
#include "bec/coupling.hpp"
#include "bec/diagnostics.hpp"

namespace bec {

struct ScenarioOutcome {
    Scenario scenario = Scenario::l1_relaxation;
    std::vector<CheckRecord> checks;
    Metrics metrics;
    DiagnosticsSeries series{standard_channels()};
    bool has_series = false;

    bool passed() const;
    const CheckRecord* find(const std::string& name) const;
    double metric(const std::string& name) const; ///< NaN if absent
};

/// Called with the step index whenever a snapshot is due.
using SnapshotHook = std::function<void(long step, const CouplingModel& model, const CouplingState& state)>;

CouplingOptions coupling_options(const RunConfig& cfg);

/// Initial kinetic data:
///   equilibrium-plus-mode  f_inf (1 + a cos(2 pi m x / L) q(p)), q = 1 (even) or p_1 / p_max (odd);
///   gaussian-bump          spatially homogeneous (M/Vol) ((1 - a) E + a G / sum G dp),
///                          G = exp(-|p - c e_1|^2 / (2 w^2));
///   random-smooth          f_inf (1 + a s(x) q(p)) with s a seeded zero-mean field of
///                          modes |k| <= 4 (amplitudes ~ e^{-|k|}, sup s = 1) and
///                          q = c_0 + c_1 p_1 / p_max, |c_0| + |c_1| = 1.
/// Every preset has mass `cfg.mass`.
PhaseSpaceField initial_kinetic_field(const KineticModel& kinetic, const RunConfig& cfg);

/// Initial wave data:
///   background      Psi = 1;
///   traveling-mode  u1 = d cos(z x), u2 = (d / U(z)) sin(z x), a linear plane wave
///                   with constant sup norms;
///   random-smooth   u1, u2 seeded fields of modes |k| <= 2, u2 zero-mean, sup = d.
WaveField initial_wave_field(const NlsModel& nls, const RunConfig& cfg);

/// Seeded band-limited real field with modes |k| <= kmax (Gaussian coefficients).
RealField random_band_limited(const Grid& grid, int kmax, bool zero_mean, std::uint64_t seed);

/// Runs one scenario. `outcome` is filled as the run progresses, so it holds the
/// partial series if an exception escapes.
void run_scenario(const RunConfig& cfg, ScenarioOutcome& outcome, const SnapshotHook& hook = {});
ScenarioOutcome run_scenario(const RunConfig& cfg);

/// Richardson self-convergence of the coupled stepper: errors of runs with dt and
/// dt/2 against a dt/8 reference at time T.
struct OrderEstimate {
    double error_coarse = 0.0;
    double error_fine = 0.0;
    double order = 0.0;
};
OrderEstimate splitting_order(const CouplingModel& model, const PhaseSpaceField& f0, const WaveField& psi0,
                              double dt, double horizon);

struct RunArtifacts {
    std::filesystem::path manifest;
    std::filesystem::path series_csv;
    std::filesystem::path report_json;
    std::filesystem::path report_csv;
    std::vector<std::filesystem::path> snapshots;
};

/// Runs the scenario and writes manifest.json, series.csv, report.json, report.csv
/// and snapshots under cfg.out_dir. Partial outputs are written before an error is
/// rethrown. Returns 0 iff every check passed.
int run(const RunConfig& cfg, RunArtifacts* artifacts = nullptr);

} // namespace bec
