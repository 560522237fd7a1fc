#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bec/common.hpp"
#include "bec/grid.hpp"
#include "bec/kinetic.hpp"
#include "bec/weight.hpp"

namespace bec {

/// Time-stamped channels with a fixed column order.
class DiagnosticsSeries {
public:
    DiagnosticsSeries() = default;
    explicit DiagnosticsSeries(std::vector<std::string> channels);

    /// Values in channel order. Rejects NaN/Inf and non-increasing times.
    void append(double t, const std::vector<double>& values);

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<std::string>& channel_names() const { return names_; }
    bool has_channel(const std::string& name) const;
    const std::vector<double>& channel(const std::string& name) const;

    /// Header "t,<channels>" then one row per sample, values printed with %.17g.
    void write_csv(std::ostream& os) const;

private:
    std::vector<std::string> names_;
    std::vector<double> times_;
    std::vector<std::vector<double>> data_;
};

/// Column order of the simulation time series.
const std::vector<std::string>& standard_channels();

enum class RateModel { exponential, power };

struct FitWindow {
    std::optional<double> t_lo; ///< default: skip the first 10% of the run
    std::optional<double> t_hi; ///< default: end of the run
};

struct RateFit {
    RateModel model = RateModel::exponential;
    double rate = 0.0; ///< > 0 means decay
    double amplitude = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
    bool flagged = false; ///< r^2 < 0.98
};

/// Least squares on log y against t (exponential) or log(1+t) (power). The window
/// ends at the first value below 1e-14.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, RateModel model, FitWindow window = {});
RateFit fit_rate(const DiagnosticsSeries& series, const std::string& channel, RateModel model, FitWindow window = {});

// Weighted Poincare quotient.

enum class GradientKind { face, centered };

/// (sum E^{-1} |grad phi|^2 dp) / (sum E^{-1} |phi|^2 dp) on the momentum grid.
/// `face` differences across cell faces with E^{-1} at the face midpoint (the form
/// the L2 collision operator dissipates); `centered` uses centered differences at
/// the nodes (one-sided at the faces of the box).
double poincare_quotient(const Grid& grid, const BoseEinsteinWeight& weight, const RealField& phi,
                         GradientKind gradient = GradientKind::face, double boundary_tol = 1e-8);

struct PoincareSearch {
    double min_quotient = 0.0;
    double max_quotient = 0.0;
    std::size_t trials = 0;
    std::size_t argmin = 0;
    std::string argmin_family;
    double weight_quotient = 0.0; ///< quotient at phi = E
};

/// Randomized Rayleigh-quotient search over smooth test functions that vanish at the
/// box faces: E-type profiles exp(-a|p|) with smooth angular/radial modulation and
/// compactly supported bumps.
PoincareSearch poincare_search(const Grid& grid, const BoseEinsteinWeight& weight, std::size_t trials,
                               std::uint64_t seed, GradientKind gradient = GradientKind::face);

// Hypocoercivity energy.

struct PerturbedEnergy {
    RealField per_mode; ///< E(zeta) for every spatial mode
    double total = 0.0; ///< (1/Vol) sum_zeta E(zeta); equals ||f||_L^2 for delta = 0
};

/// E(zeta) = int |f^|^2 E^{-1} dp + delta Re[(-i zeta.j^(zeta) / (1+|zeta|^2)) conj(rho^(zeta))],
/// j = int p f dp, rho = int f dp.
PerturbedEnergy perturbed_energy(const KineticModel& kinetic, const PhaseSpaceField& f, double delta);

/// Cauchy-Schwarz constant kappa with |E - ||f||^2| <= kappa delta ||f||^2:
/// kappa = (1/2) (int |p|^2 E dp)^{1/2}.
double perturbed_energy_kappa(const KineticModel& kinetic);

// Conservation.

struct DriftRecord {
    std::string channel;
    double max_relative_drift = 0.0;
    std::size_t worst_index = 0;
    double tolerance = 0.0;
    bool passed = true;
};

struct ConservationReport {
    std::vector<DriftRecord> records;
    bool passed = true;
};

ConservationReport conservation_report(const DiagnosticsSeries& series, const std::vector<std::string>& channels,
                                       double tolerance);

// Summary report.

struct CheckRecord {
    std::string name;
    std::string target;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

using Metrics = std::vector<std::pair<std::string, double>>;

/// {"passed": all checks passed, "checks": [...], "metrics": {...}}
void write_report_json(std::ostream& os, const std::vector<CheckRecord>& checks, const Metrics& metrics = {});
void write_report_csv(std::ostream& os, const std::vector<CheckRecord>& checks);

} // namespace bec
