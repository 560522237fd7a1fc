#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bec/coupling.hpp"
#include "bec/diagnostics.hpp"
#include "bec/grid.hpp"
#include "bec/kinetic.hpp"
#include "bec/nls.hpp"
#include "bec/spectral.hpp"

namespace bec {

enum class Scenario {
    l1_relaxation,
    l2_decay,
    poincare_check,
    normal_form_residual,
    nls_equilibrium,
    coupled_smalldata,
    picard
};

enum class InitialPreset { equilibrium_plus_mode, gaussian_bump, random_smooth };
enum class MomentumPattern { even, odd };
enum class WavePreset { background, traveling_mode, random_smooth };
enum class DumpMode { none, final, every };

struct Tolerances {
    double mass_drift = 1e-10;
    double relaxation = 1e-8;    ///< exact L1 relaxation match
    double rate_fraction = 0.1;  ///< relative slack on rate targets
    double r2_decay = 0.99;
    double r2_rho = 0.95;
    double poincare_min = 0.24;
    double residual_slope = 2.9;
    double oracle = 1e-10;
    double order_lo = 1.8;
    double order_hi = 2.2;
    double picard_ratio = 0.8;
    double picard_match = 5.0;   ///< factor on dt^2
    double sup_growth = 2.0;
    double equilibrium_drift = 1e-12;
};

struct RunConfig {
    Scenario scenario = Scenario::l1_relaxation;
    GridSpec grid;
    double epsilon = 0.5;
    OperatorKind operator_kind = OperatorKind::L1;
    KernelKind kernel_kind = KernelKind::exponential;
    L2Form l2_form = L2Form::divergence;
    double nc_constant = 1.0; ///< N_c for kinetic-only scenarios
    NormalFormOptions normal_form;

    double dt = 0.05;
    double t_end = 2.0;

    InitialPreset preset = InitialPreset::equilibrium_plus_mode;
    MomentumPattern pattern = MomentumPattern::even;
    double amplitude = 0.01;
    double mass = 1.0;
    int mode = 1;
    double bump_center = 1.0;
    double bump_width = 1.0;
    WavePreset wave = WavePreset::traveling_mode;
    double wave_amplitude = 0.01;
    int wave_mode = 1;
    std::uint64_t seed = 1;

    std::string out_dir = "out";
    DumpMode dump = DumpMode::none;
    int dump_every = 0;

    Tolerances tol;

    double energy_delta = 0.05;
    double small_data_delta = 1e-2;
    int poincare_trials = 1000;
    GradientKind gradient = GradientKind::face;
    int picard_iterations = 6;
    std::optional<double> fit_t_lo;
    std::optional<double> fit_t_hi;
    bool order_check = false;
    std::vector<double> residual_eps{1e-2, 1e-3, 1e-4};
};

/// All validation problems found in a config, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

std::string to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);

/// Desk-scale defaults for a scenario.
RunConfig default_config(Scenario s);

/// INI text: a top-level `scenario = ...` plus optional sections grid, model, time,
/// initial, output, tolerance, diagnostics. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies "none", "final" or "every-K"; throws ConfigError otherwise.
void set_dump_mode(RunConfig& cfg, const std::string& value);

/// Range checks shared by the parser and programmatic callers; returns all problems.
std::vector<std::string> validate(const RunConfig& cfg);

} // namespace bec
