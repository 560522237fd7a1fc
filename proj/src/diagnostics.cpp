#include "bec/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace bec {

DiagnosticsSeries::DiagnosticsSeries(std::vector<std::string> channels)
    : names_(std::move(channels)), data_(names_.size()) {}

void DiagnosticsSeries::append(double t, const std::vector<double>& values) {
    if (values.size() != names_.size())
        throw std::invalid_argument("series: expected " + std::to_string(names_.size()) + " values, got " +
                                    std::to_string(values.size()));
    if (!std::isfinite(t)) throw std::invalid_argument("series: non-finite time");
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("series: times must increase (got " + std::to_string(t) + " after " +
                                    std::to_string(times_.back()) + ")");
    for (std::size_t c = 0; c < values.size(); ++c)
        if (!std::isfinite(values[c]))
            throw std::invalid_argument("series: non-finite value in channel '" + names_[c] + "' at t = " +
                                        std::to_string(t));
    times_.push_back(t);
    for (std::size_t c = 0; c < values.size(); ++c) data_[c].push_back(values[c]);
}

bool DiagnosticsSeries::has_channel(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& DiagnosticsSeries::channel(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::out_of_range("series: no channel '" + name + "'");
    return data_[static_cast<std::size_t>(it - names_.begin())];
}

void DiagnosticsSeries::write_csv(std::ostream& os) const {
    os << "t";
    for (const auto& n : names_) os << ',' << n;
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < times_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", times_[i]);
        os << buf;
        for (const auto& col : data_) {
            std::snprintf(buf, sizeof buf, "%.17g", col[i]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

const std::vector<std::string>& standard_channels() {
    static const std::vector<std::string> names{"mass_f",  "mass_psi", "l_norm_dev", "grad_l_norm",
                                                "rho_dev_l2", "sup_u1", "sup_u2",     "min_nc",
                                                "max_nc",  "grad_nc_inf", "energy_functional"};
    return names;
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, RateModel model, FitWindow window) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_rate: time and value lengths differ");
    if (t.empty()) throw InsufficientDataError("fit_rate: empty series");
    const double t0 = t.front(), t1 = t.back();
    const double lo = window.t_lo.value_or(t0 + 0.1 * (t1 - t0));
    const double hi = window.t_hi.value_or(t1);

    std::vector<double> xs, zs;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < lo || t[i] > hi) continue;
        if (!(y[i] >= 1e-14)) break;
        xs.push_back(model == RateModel::exponential ? t[i] : std::log1p(t[i]));
        zs.push_back(std::log(y[i]));
    }
    if (xs.size() < 8)
        throw InsufficientDataError("fit_rate: " + std::to_string(xs.size()) + " usable samples in window [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "], need at least 8");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, mz = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        mz += zs[i];
    }
    mx /= n;
    mz /= n;
    double sxx = 0.0, sxz = 0.0, szz = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxz += (xs[i] - mx) * (zs[i] - mz);
        szz += (zs[i] - mz) * (zs[i] - mz);
    }
    if (sxx <= 0.0) throw InsufficientDataError("fit_rate: all samples at the same abscissa");
    const double slope = sxz / sxx;
    const double intercept = mz - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = zs[i] - (intercept + slope * xs[i]);
        ss_res += e * e;
    }

    RateFit fit;
    fit.model = model;
    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    fit.t_lo = model == RateModel::exponential ? xs.front() : std::expm1(xs.front());
    fit.t_hi = model == RateModel::exponential ? xs.back() : std::expm1(xs.back());
    fit.samples = xs.size();
    // A flat series is fitted exactly by a zero slope.
    fit.r_squared = szz > 1e-30 * n ? std::clamp(1.0 - ss_res / szz, 0.0, 1.0) : 1.0;
    fit.flagged = fit.r_squared < 0.98;
    return fit;
}

RateFit fit_rate(const DiagnosticsSeries& series, const std::string& channel, RateModel model, FitWindow window) {
    return fit_rate(series.times(), series.channel(channel), model, window);
}

PerturbedEnergy perturbed_energy(const KineticModel& kinetic, const PhaseSpaceField& f, double delta) {
    const Grid& g = kinetic.grid();
    const std::size_t nr = g.spatial_size();
    const std::size_t np = g.momentum_size();
    if (f.values.size() != nr * np) throw DimensionError("perturbed energy: field has the wrong size");
    ComplexField hat = to_complex(f.values);
    kinetic.spectral().phase_space_fft().forward(hat.data());
    const RealField& inv = kinetic.weight().inverse();
    const auto& zeta = kinetic.spectral().frequencies();
    const double dp = g.cell_volume_p();

    PerturbedEnergy out;
    out.per_mode.resize(nr);
    double total = 0.0;
    for (std::size_t m = 0; m < nr; ++m) {
        const Complex* row = hat.data() + m * np;
        double e = 0.0;
        Complex rho{};
        Complex zj{};
        for (std::size_t j = 0; j < np; ++j) {
            e += std::norm(row[j]) * inv[j];
            rho += row[j];
            const Vec3 p = g.momentum(j);
            double pz = 0.0;
            for (int a = 0; a < g.dim_r(); ++a) pz += p[a] * zeta[m][a];
            zj += pz * row[j];
        }
        e *= dp;
        rho *= dp;
        zj *= dp;
        const Complex r_term = Complex(0.0, -1.0) * zj / (1.0 + norm2(zeta[m])) * std::conj(rho);
        out.per_mode[m] = e + delta * r_term.real();
        total += out.per_mode[m];
    }
    out.total = total / g.volume_r();
    return out;
}

double perturbed_energy_kappa(const KineticModel& kinetic) {
    const Grid& g = kinetic.grid();
    const RealField& e = kinetic.weight().values();
    double s = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const Vec3 p = g.momentum(j);
        double p2 = 0.0;
        for (int a = 0; a < g.dim_r(); ++a) p2 += p[a] * p[a];
        s += p2 * e[j];
    }
    return 0.5 * std::sqrt(s * g.cell_volume_p());
}

ConservationReport conservation_report(const DiagnosticsSeries& series, const std::vector<std::string>& channels,
                                       double tolerance) {
    ConservationReport report;
    for (const auto& name : channels) {
        const auto& y = series.channel(name);
        DriftRecord rec;
        rec.channel = name;
        rec.tolerance = tolerance;
        if (!y.empty()) {
            const double ref = y.front();
            const double scale = std::abs(ref) > 0.0 ? std::abs(ref) : 1.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double d = std::abs(y[i] - ref) / scale;
                if (d > rec.max_relative_drift) {
                    rec.max_relative_drift = d;
                    rec.worst_index = i;
                }
            }
        }
        rec.passed = rec.max_relative_drift <= tolerance;
        report.passed = report.passed && rec.passed;
        report.records.push_back(rec);
    }
    return report;
}

void write_report_json(std::ostream& os, const std::vector<CheckRecord>& checks, const Metrics& metrics) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    bool passed = true;
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["target"] = c.target;
        j["measured"] = c.measured;
        j["tolerance"] = c.tolerance;
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
        passed = passed && c.passed;
    }
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [name, value] : metrics) {
        if (std::isfinite(value)) m[name] = value;
        else m[name] = nullptr;
    }
    nlohmann::ordered_json report;
    report["passed"] = passed;
    report["checks"] = std::move(arr);
    report["metrics"] = std::move(m);
    os << report.dump(2) << '\n';
}

namespace {
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}
} // namespace

void write_report_csv(std::ostream& os, const std::vector<CheckRecord>& checks) {
    os << "name,target,measured,tolerance,passed,detail\n";
    char buf[32];
    for (const auto& c : checks) {
        os << csv_quote(c.name) << ',' << csv_quote(c.target) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", c.measured);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", c.tolerance);
        os << buf << ',' << (c.passed ? "pass" : "fail") << ',' << csv_quote(c.detail) << '\n';
    }
}

} // namespace bec
