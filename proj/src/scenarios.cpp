#include "bec/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "bec/io.hpp"

namespace bec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

CheckRecord check_le(std::string name, double measured, double bound, std::string detail = {})
{
    return {std::move(name), "<= " + fmt_num(bound), measured, bound, measured <= bound, std::move(detail)};
}

CheckRecord check_ge(std::string name, double measured, double bound, std::string detail = {})
{
    return {std::move(name), ">= " + fmt_num(bound), measured, bound, measured >= bound, std::move(detail)};
}

int step_count(const RunConfig& cfg)
{
    const double n = cfg.t_end / cfg.dt;
    const long r = std::lround(n);
    if (std::abs(n - static_cast<double>(r)) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument("time.t_end must be an integer multiple of time.dt");
    return static_cast<int>(r);
}

double max_relative_drift(const std::vector<double>& x)
{
    double d = 0.0;
    const double scale = std::max(std::abs(x.front()), std::numeric_limits<double>::min());
    for (double v : x) d = std::max(d, std::abs(v - x.front()) / scale);
    return d;
}

FitWindow fit_window(const RunConfig& cfg) { return {cfg.fit_t_lo, cfg.fit_t_hi}; }

void add_fit_metrics(Metrics& m, const std::string& prefix, const RateFit& fit)
{
    m.emplace_back(prefix + "_rate", fit.rate);
    m.emplace_back(prefix + "_r2", fit.r_squared);
    m.emplace_back(prefix + "_t_lo", fit.t_lo);
    m.emplace_back(prefix + "_t_hi", fit.t_hi);
    m.emplace_back(prefix + "_samples", static_cast<double>(fit.samples));
}

// Steps the state for the configured horizon, calling the snapshot hook as configured.
void evolve(const RunConfig& cfg, const CouplingModel& model, CouplingState& s, ScenarioOutcome& out,
            const SnapshotHook& hook, const std::function<void(const CouplingState&)>& per_step = {})
{
    const int steps = step_count(cfg);
    out.has_series = true;
    if (hook && cfg.dump == DumpMode::every) hook(0, model, s);
    for (int n = 1; n <= steps; ++n) {
        model.step(s, cfg.dt);
        out.series = s.series;
        if (per_step) per_step(s);
        if (hook && cfg.dump == DumpMode::every && n % cfg.dump_every == 0) hook(n, model, s);
    }
    if (hook && (cfg.dump == DumpMode::final || (cfg.dump == DumpMode::every && steps % cfg.dump_every != 0)))
        hook(steps, model, s);
}

// ---------------------------------------------------------------------------

void run_l1_relaxation(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    CouplingOptions opt = coupling_options(cfg);
    opt.operator_kind = OperatorKind::L1;
    opt.frozen_nc = cfg.nc_constant;
    const Grid grid(cfg.grid);
    const CouplingModel model(grid, opt);
    CouplingState s = model.make_state(initial_kinetic_field(model.kinetic(), cfg), model.nls().background());
    out.series = s.series;
    evolve(cfg, model, s, out, hook);

    const auto& t = out.series.times();
    const auto& dev = out.series.channel("l_norm_dev");
    const double n = cfg.nc_constant;
    double worst = 0.0, worst_probe = 0.0;
    std::string probes;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double exact = dev.front() * std::exp(-n * t[i]);
        const double rel = std::abs(dev[i] - exact) / exact;
        worst = std::max(worst, rel);
        for (double probe : {0.5, 1.0, 2.0}) {
            if (std::abs(t[i] - probe) < 1e-9) {
                worst_probe = std::max(worst_probe, rel);
                probes += (probes.empty() ? "" : ", ") + ("t=" + fmt_num(probe) + ": " + fmt_num(rel));
            }
        }
    }
    out.metrics.emplace_back("initial_deviation", dev.front());
    out.metrics.emplace_back("max_relative_error_all_samples", worst);
    out.checks.push_back(check_le("exact_relaxation", probes.empty() ? worst : worst_probe, cfg.tol.relaxation,
                                  probes.empty() ? "all samples" : probes));

    const RateFit fit = fit_rate(out.series, "l_norm_dev", RateModel::exponential, fit_window(cfg));
    add_fit_metrics(out.metrics, "deviation_fit", fit);
    const double rel_rate = std::abs(fit.rate - n) / n;
    out.checks.push_back(check_le("relaxation_rate", rel_rate, cfg.tol.rate_fraction,
                                  "fitted " + fmt_num(fit.rate) + " against N_c = " + fmt_num(n)));
    const double drift = max_relative_drift(out.series.channel("mass_f"));
    out.checks.push_back(check_le("mass_drift", drift, cfg.tol.mass_drift));
}

void run_l2_decay(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    CouplingOptions opt = coupling_options(cfg);
    opt.operator_kind = OperatorKind::L2;
    opt.frozen_nc = cfg.nc_constant;
    const Grid grid(cfg.grid);
    const CouplingModel model(grid, opt);
    CouplingState s = model.make_state(initial_kinetic_field(model.kinetic(), cfg), model.nls().background());
    out.series = s.series;
    evolve(cfg, model, s, out, hook);

    const auto& dev = out.series.channel("l_norm_dev");
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < dev.size(); ++i)
        worst_increase = std::max(worst_increase, (dev[i] - dev[i - 1]) / dev.front());
    const RateFit fit = fit_rate(out.series, "l_norm_dev", RateModel::exponential, fit_window(cfg));
    add_fit_metrics(out.metrics, "deviation_fit", fit);
    const double bound = 0.25 * cfg.nc_constant * (1.0 - cfg.tol.rate_fraction);
    out.checks.push_back(check_ge("decay_rate", fit.rate, bound, "lower bound N_c / 4 less the rate slack"));
    out.checks.push_back(check_ge("decay_fit_r2", fit.r_squared, cfg.tol.r2_decay));
    // Increases are measured relative to the initial deviation; anything above
    // roundoff counts.
    out.checks.push_back(check_le("monotone_deviation", worst_increase, 1e-13, "largest step-to-step increase"));
    out.metrics.emplace_back("mass_drift", max_relative_drift(out.series.channel("mass_f")));
    out.metrics.emplace_back("l2_solver_iterations", static_cast<double>(model.kinetic().l2_iterations()));
    out.metrics.emplace_back("final_relative_deviation", dev.back() / dev.front());
}

void run_poincare(const RunConfig& cfg, ScenarioOutcome& out)
{
    const Grid grid(cfg.grid);
    const BoseEinsteinWeight weight(grid, cfg.epsilon);
    const PoincareSearch search =
        poincare_search(grid, weight, static_cast<std::size_t>(cfg.poincare_trials), cfg.seed, cfg.gradient);
    out.metrics.emplace_back("trials", static_cast<double>(search.trials));
    out.metrics.emplace_back("min_quotient", search.min_quotient);
    out.metrics.emplace_back("max_quotient", search.max_quotient);
    out.metrics.emplace_back("argmin_trial", static_cast<double>(search.argmin));
    out.metrics.emplace_back("weight_quotient", search.weight_quotient);
    out.metrics.emplace_back("weight_boundary_ratio", weight.boundary_ratio());
    out.checks.push_back(check_ge("poincare_minimum", search.min_quotient, cfg.tol.poincare_min,
                                  "argmin family " + search.argmin_family));
    out.checks.push_back(check_ge("trial_count", static_cast<double>(search.trials), cfg.poincare_trials));
}

double log_log_slope(const std::vector<double>& eps, const std::vector<double>& r)
{
    // Least squares slope of log r against log eps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log(eps[i]), y = std::log(r[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void run_normal_form(const RunConfig& cfg, ScenarioOutcome& out)
{
    const Grid grid(cfg.grid);
    const NlsModel nls(grid);
    const Spectral& sp = nls.spectral();
    const RealField a = random_band_limited(grid, 2, false, cfg.seed);
    const RealField b = random_band_limited(grid, 2, true, cfg.seed + 1);
    const RealField v = random_band_limited(grid, 2, false, cfg.seed + 2);

    const auto residuals = [&](const NormalFormOptions& opt, const RealField* V) {
        std::vector<double> r;
        for (double e : cfg.residual_eps) {
            RealField u1 = a, u2 = b;
            for (double& x : u1) x *= e;
            for (double& x : u2) x *= e;
            r.push_back(sp.l2_norm(normal_form_residual(nls, u1, u2, V, opt)));
        }
        return r;
    };
    const auto slope_of = [&](const std::vector<double>& r) {
        if (*std::min_element(r.begin(), r.end()) <= 0.0) return std::numeric_limits<double>::infinity();
        return log_log_slope(cfg.residual_eps, r);
    };

    const auto r_default = residuals(cfg.normal_form, nullptr);
    const double slope = slope_of(r_default);
    for (std::size_t i = 0; i < r_default.size(); ++i)
        out.metrics.emplace_back("residual_eps_" + fmt_num(cfg.residual_eps[i]), r_default[i]);
    out.checks.push_back(check_ge("residual_slope", slope, cfg.tol.residual_slope, "V = 0"));

    const double slope_v = slope_of(residuals(cfg.normal_form, &v));
    out.checks.push_back(check_ge("residual_slope_with_potential", slope_v, cfg.tol.residual_slope,
                                  "V fixed, order one"));

    // Comparison tables, reported only.
    NormalFormOptions printed = cfg.normal_form;
    printed.b1 = QuadraticTable::printed;
    out.metrics.emplace_back("slope_printed_quadratic_table", slope_of(residuals(printed, nullptr)));
    const NormalFormOptions consistent{QuadraticTable::rederived, QuarticTerm::quartic, CubicTable::all_slots};
    const auto r_consistent = residuals(consistent, nullptr);
    out.metrics.emplace_back("max_residual_consistent_tables",
                             *std::max_element(r_consistent.begin(), r_consistent.end()));

    // Direct convolution sums against padded-transform products.
    const ComplexField fa = to_complex(a), fb = to_complex(b), fv = to_complex(v);
    const auto& engine = nls.engine();
    const auto one2 = [](const Vec3&, const Vec3&) { return 1.0; };
    const auto one3 = [](const Vec3&, const Vec3&, const Vec3&) { return 1.0; };
    const auto rel_diff = [&](const ComplexField& x, const ComplexField& y) {
        ComplexField d(x.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
        return sp.l2_norm(d) / std::max(sp.l2_norm(y), 1e-300);
    };
    const double e2 = rel_diff(engine.bilinear(one2, fa, fb), engine.product(fa, fb));
    const double e3 = rel_diff(engine.trilinear(one3, fa, fb, fv), engine.product(fa, fb, fv));
    out.checks.push_back(check_le("multilinear_oracle", std::max(e2, e3), cfg.tol.oracle,
                                  "direct convolution sums against padded products"));
}

void run_nls_equilibrium(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    const Grid grid(cfg.grid);
    const CouplingModel model(grid, coupling_options(cfg));
    const Equilibrium eq = model.kinetic().equilibrium(cfg.mass);
    CouplingState s = model.make_state(model.kinetic().equilibrium_field(eq), model.nls().background());
    out.series = s.series;
    evolve(cfg, model, s, out, hook);

    double worst = 0.0;
    std::string worst_channel;
    for (const auto& name : out.series.channel_names()) {
        const auto& x = out.series.channel(name);
        const double scale = std::max(1.0, std::abs(x.front()));
        for (double v : x) {
            const double d = std::abs(v - x.front()) / scale;
            if (d > worst) {
                worst = d;
                worst_channel = name;
            }
        }
    }
    out.checks.push_back(check_le("channels_constant", worst, cfg.tol.equilibrium_drift,
                                  worst_channel.empty() ? "all channels" : "worst channel " + worst_channel));
}

void run_coupled(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    const Grid grid(cfg.grid);
    const CouplingModel model(grid, coupling_options(cfg));
    const PhaseSpaceField f0 = initial_kinetic_field(model.kinetic(), cfg);
    const WaveField psi0 = initial_wave_field(model.nls(), cfg);
    CouplingState s = model.make_state(f0, psi0);
    out.series = s.series;

    // Small-data precondition.
    const double f_dev = s.series.channel("l_norm_dev").front();
    ComplexField u(psi0.psi.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = psi0.psi[i] - 1.0;
    const double psi_dev = model.spectral().h1_norm(u);
    out.metrics.emplace_back("initial_kinetic_deviation", f_dev);
    out.metrics.emplace_back("initial_wave_h1_deviation", psi_dev);
    out.checks.push_back(check_le("small_data", std::max(f_dev, psi_dev), cfg.small_data_delta,
                                  "max of ||f0 - f_inf||_L and ||Psi0 - 1||_H1"));

    std::vector<double> v_norm{model.spectral().l2_norm(s.v_pot)};
    evolve(cfg, model, s, out, hook,
           [&](const CouplingState& st) { v_norm.push_back(model.spectral().l2_norm(st.v_pot)); });

    const double drift_f = max_relative_drift(out.series.channel("mass_f"));
    const double drift_psi = max_relative_drift(out.series.channel("mass_psi"));
    out.metrics.emplace_back("mass_f_drift", drift_f);
    out.metrics.emplace_back("mass_psi_drift", drift_psi);
    if (cfg.operator_kind == OperatorKind::L1) out.checks.push_back(check_le("mass_f_drift", drift_f, cfg.tol.mass_drift));
    out.checks.push_back(check_le("mass_psi_drift", drift_psi, cfg.tol.mass_drift));

    const RateFit rho_fit = fit_rate(out.series, "rho_dev_l2", RateModel::exponential, fit_window(cfg));
    add_fit_metrics(out.metrics, "rho_fit", rho_fit);
    if (cfg.operator_kind == OperatorKind::L2) {
        out.checks.push_back({"rho_decay_rate", "> 0", rho_fit.rate, 0.0, rho_fit.rate > 0.0, {}});
        out.checks.push_back(check_ge("rho_decay_r2", rho_fit.r_squared, cfg.tol.r2_rho));
    }

    const RateFit v_fit = fit_rate(out.series.times(), v_norm, RateModel::exponential, fit_window(cfg));
    add_fit_metrics(out.metrics, "potential_fit", v_fit);
    const double mismatch = std::abs(v_fit.rate - rho_fit.rate) / std::max(std::abs(rho_fit.rate), 1e-300);
    out.checks.push_back(check_le("potential_decay_matches_rho", mismatch, cfg.tol.rate_fraction,
                                  "fitted ||V|| rate " + fmt_num(v_fit.rate)));
    out.checks.back().passed = out.checks.back().passed && v_fit.rate > 0.0;

    for (const char* name : {"sup_u1", "sup_u2"}) {
        const auto& x = out.series.channel(name);
        const double peak = *std::max_element(x.begin(), x.end());
        const double ratio = x.front() > 0.0 ? peak / x.front() : std::numeric_limits<double>::infinity();
        out.checks.push_back(check_le(std::string(name) + "_growth", ratio, cfg.tol.sup_growth,
                                      "peak over initial value"));
    }

    if (cfg.order_check) {
        const double horizon = std::min(cfg.t_end, 1.0);
        const OrderEstimate est = splitting_order(model, f0, psi0, cfg.dt, horizon);
        out.metrics.emplace_back("order_error_coarse", est.error_coarse);
        out.metrics.emplace_back("order_error_fine", est.error_fine);
        CheckRecord c{"splitting_order", "in [" + fmt_num(cfg.tol.order_lo) + ", " + fmt_num(cfg.tol.order_hi) + "]",
                      est.order, cfg.tol.order_hi - cfg.tol.order_lo,
                      est.order >= cfg.tol.order_lo && est.order <= cfg.tol.order_hi,
                      "Richardson against dt/8 over T = " + fmt_num(horizon)};
        out.checks.push_back(std::move(c));
    }
}

void run_picard(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    const Grid grid(cfg.grid);
    const CouplingModel model(grid, coupling_options(cfg));
    const PhaseSpaceField f0 = initial_kinetic_field(model.kinetic(), cfg);
    const WaveField psi0 = initial_wave_field(model.nls(), cfg);
    const int steps = step_count(cfg);

    const PicardResult pr = picard_iterate(model, f0, psi0, {cfg.t_end, cfg.dt, cfg.picard_iterations});
    for (std::size_t k = 0; k < pr.d.size(); ++k) out.metrics.emplace_back("d_" + std::to_string(k), pr.d[k]);

    // d_1 .. d_5 must decrease with bounded ratio. Once an iterate difference
    // reaches the roundoff floor the iteration has converged and later d_k only
    // have to stay at that floor.
    double psi_scale = 0.0;
    for (const auto& w : pr.psi.back()) psi_scale = std::max(psi_scale, model.spectral().l2_norm(w.psi));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * psi_scale;
    bool monotone = true, strict = true;
    double ratio = 0.0;
    const std::size_t last = std::min<std::size_t>(pr.d.size() - 1, 5);
    std::size_t resolved = 0;
    for (std::size_t k = 2; k <= last; ++k) {
        strict = strict && pr.d[k] < pr.d[k - 1];
        if (pr.d[k - 1] > floor) {
            monotone = monotone && pr.d[k] < pr.d[k - 1];
            ratio = std::max(ratio, pr.d[k] / pr.d[k - 1]);
            ++resolved;
        } else {
            monotone = monotone && pr.d[k] <= floor;
        }
    }
    out.metrics.emplace_back("roundoff_floor", floor);
    out.metrics.emplace_back("strictly_monotone_raw", strict ? 1.0 : 0.0);
    out.metrics.emplace_back("ratios_above_floor", static_cast<double>(resolved));
    out.checks.push_back({"picard_monotone", "d_k decreasing for k = 1.." + std::to_string(last) + " down to roundoff",
                          monotone ? 1.0 : 0.0, floor, monotone && resolved > 0,
                          std::to_string(resolved) + " ratios above the roundoff floor"});
    out.checks.push_back(check_le("picard_ratio", ratio, cfg.tol.picard_ratio, "largest d_k / d_{k-1}"));

    CouplingState s = model.make_state(f0, psi0);
    out.series = s.series;
    out.has_series = true;
    double dist = 0.0;
    const auto& fixed = pr.psi.back();
    for (int n = 1; n <= steps; ++n) {
        model.step(s, cfg.dt);
        ComplexField d(s.psi.psi.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.psi.psi[i] - fixed[static_cast<std::size_t>(n)].psi[i];
        dist = std::max(dist, model.spectral().l2_norm(d));
    }
    out.series = s.series;
    if (hook && cfg.dump != DumpMode::none) hook(steps, model, s);
    out.checks.push_back(check_le("picard_matches_stepping", dist, cfg.tol.picard_match * cfg.dt * cfg.dt,
                                  "sup over t of the L2 distance"));
    out.metrics.emplace_back("contraction_warning", pr.contraction_warning ? 1.0 : 0.0);
}

} // namespace

bool ScenarioOutcome::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

const CheckRecord* ScenarioOutcome::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

double ScenarioOutcome::metric(const std::string& name) const
{
    for (const auto& [n, v] : metrics)
        if (n == name) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

CouplingOptions coupling_options(const RunConfig& cfg)
{
    CouplingOptions o;
    o.epsilon = cfg.epsilon;
    o.operator_kind = cfg.operator_kind;
    o.kernel_kind = cfg.kernel_kind;
    o.l2_form = cfg.l2_form;
    o.energy_delta = cfg.energy_delta;
    return o;
}

RealField random_band_limited(const Grid& grid, int kmax, bool zero_mean, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const Spectral sp(grid);
    ComplexField hat(sp.size(), Complex{});
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const Index3 k = grid.mode(i);
        int kabs = 0;
        bool nyquist = false;
        for (int a = 0; a < grid.dim_r(); ++a) {
            kabs = std::max(kabs, std::abs(k[a]));
            nyquist = nyquist || std::abs(k[a]) == grid.n_r() / 2;
        }
        const double re = normal(rng), im = normal(rng);
        if (kabs > kmax || nyquist || (zero_mean && kabs == 0)) continue;
        hat[i] = Complex(re, im) * grid.volume_r();
    }
    // Symmetrize so the field is real.
    ComplexField sym(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const Index3 k = grid.mode(i);
        const auto j = grid.mode_flat({-k[0], -k[1], -k[2]});
        sym[i] = 0.5 * (hat[i] + (j ? std::conj(hat[*j]) : Complex{}));
    }
    return real_part(sp.inverse(std::move(sym)));
}

PhaseSpaceField initial_kinetic_field(const KineticModel& kinetic, const RunConfig& cfg)
{
    const Grid& grid = kinetic.grid();
    const Equilibrium eq = kinetic.equilibrium(cfg.mass);
    const std::size_t nr = grid.spatial_size(), np = grid.momentum_size();
    PhaseSpaceField f{RealField(grid.phase_size()), 0.0};
    const double k = 2.0 * kPi * cfg.mode / grid.length_r();

    const auto pattern = [&](std::size_t ip) {
        return cfg.pattern == MomentumPattern::even ? 1.0 : grid.momentum(ip)[0] / grid.p_max();
    };

    switch (cfg.preset) {
    case InitialPreset::equilibrium_plus_mode:
        for (std::size_t ir = 0; ir < nr; ++ir) {
            const double s = std::cos(k * grid.position(ir)[0]);
            for (std::size_t ip = 0; ip < np; ++ip)
                f.values[ir * np + ip] = eq.f_inf[ip] * (1.0 + cfg.amplitude * s * pattern(ip));
        }
        break;
    case InitialPreset::gaussian_bump: {
        RealField g(np);
        double total = 0.0;
        for (std::size_t ip = 0; ip < np; ++ip) {
            Vec3 p = grid.momentum(ip);
            p[0] -= cfg.bump_center;
            g[ip] = std::exp(-norm2(p) / (2.0 * cfg.bump_width * cfg.bump_width));
            total += g[ip] * grid.cell_volume_p();
        }
        for (std::size_t ir = 0; ir < nr; ++ir)
            for (std::size_t ip = 0; ip < np; ++ip)
                f.values[ir * np + ip] =
                    (1.0 - cfg.amplitude) * eq.f_inf[ip] + cfg.amplitude * eq.density * g[ip] / total;
        break;
    }
    case InitialPreset::random_smooth: {
        RealField s = random_band_limited(grid, 4, true, cfg.seed);
        // Reweight toward low modes, then normalize to unit sup.
        const Spectral& sp = kinetic.spectral();
        ComplexField hat = sp.forward(s);
        for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= std::exp(-std::sqrt(sp.frequency_abs2()[i]));
        s = real_part(sp.inverse(std::move(hat)));
        double sup = 0.0;
        for (double x : s) sup = std::max(sup, std::abs(x));
        if (sup > 0.0)
            for (double& x : s) x /= sup;
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double c0 = uni(rng), c1 = uni(rng);
        const double norm = std::abs(c0) + std::abs(c1);
        c0 /= norm;
        c1 /= norm;
        for (std::size_t ir = 0; ir < nr; ++ir)
            for (std::size_t ip = 0; ip < np; ++ip) {
                const double q = c0 + c1 * grid.momentum(ip)[0] / grid.p_max();
                f.values[ir * np + ip] = eq.f_inf[ip] * (1.0 + cfg.amplitude * s[ir] * q);
            }
        break;
    }
    }
    return f;
}

WaveField initial_wave_field(const NlsModel& nls, const RunConfig& cfg)
{
    const Grid& grid = nls.grid();
    const std::size_t n = grid.spatial_size();
    RealField u1(n, 0.0), u2(n, 0.0);
    switch (cfg.wave) {
    case WavePreset::background:
        break;
    case WavePreset::traveling_mode: {
        const double z = 2.0 * kPi * cfg.wave_mode / grid.length_r();
        const double amp2 = cfg.wave_amplitude / u_symbol(z * z);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.position(i)[0];
            u1[i] = cfg.wave_amplitude * std::cos(z * x);
            u2[i] = amp2 * std::sin(z * x);
        }
        break;
    }
    case WavePreset::random_smooth: {
        u1 = random_band_limited(grid, 2, false, cfg.seed + 101);
        u2 = random_band_limited(grid, 2, true, cfg.seed + 202);
        for (RealField* u : {&u1, &u2}) {
            double sup = 0.0;
            for (double x : *u) sup = std::max(sup, std::abs(x));
            if (sup > 0.0)
                for (double& x : *u) x *= cfg.wave_amplitude / sup;
        }
        break;
    }
    }
    return nls.from_perturbation(u1, u2);
}

OrderEstimate splitting_order(const CouplingModel& model, const PhaseSpaceField& f0, const WaveField& psi0,
                              double dt, double horizon)
{
    const auto run_with = [&](double h) {
        CouplingState s = model.make_state(f0, psi0);
        const long steps = std::lround(horizon / h);
        for (long n = 0; n < steps; ++n) model.step(s, h, false);
        return s;
    };
    const CouplingState ref = run_with(dt / 8.0);
    const auto error = [&](const CouplingState& s) {
        PhaseSpaceField df = s.f;
        for (std::size_t i = 0; i < df.values.size(); ++i) df.values[i] -= ref.f.values[i];
        ComplexField dpsi(s.psi.psi.size());
        for (std::size_t i = 0; i < dpsi.size(); ++i) dpsi[i] = s.psi.psi[i] - ref.psi.psi[i];
        const double ef = model.kinetic().l_norm(df);
        const double ep = model.spectral().l2_norm(dpsi);
        return std::sqrt(ef * ef + ep * ep);
    };
    OrderEstimate e;
    e.error_coarse = error(run_with(dt));
    e.error_fine = error(run_with(dt / 2.0));
    e.order = std::log2(e.error_coarse / e.error_fine);
    return e;
}

void run_scenario(const RunConfig& cfg, ScenarioOutcome& out, const SnapshotHook& hook)
{
    if (auto problems = validate(cfg); !problems.empty()) throw ConfigError(std::move(problems));
    out.scenario = cfg.scenario;
    spdlog::info("scenario {}: grid dim_r={} dim_p={} n_r={} n_p={}", to_string(cfg.scenario), cfg.grid.dim_r,
                 cfg.grid.dim_p, cfg.grid.n_r, cfg.grid.n_p);
    switch (cfg.scenario) {
    case Scenario::l1_relaxation: run_l1_relaxation(cfg, out, hook); break;
    case Scenario::l2_decay: run_l2_decay(cfg, out, hook); break;
    case Scenario::poincare_check: run_poincare(cfg, out); break;
    case Scenario::normal_form_residual: run_normal_form(cfg, out); break;
    case Scenario::nls_equilibrium: run_nls_equilibrium(cfg, out, hook); break;
    case Scenario::coupled_smalldata: run_coupled(cfg, out, hook); break;
    case Scenario::picard: run_picard(cfg, out, hook); break;
    }
}

ScenarioOutcome run_scenario(const RunConfig& cfg)
{
    ScenarioOutcome out;
    run_scenario(cfg, out);
    return out;
}

namespace {

const char* to_string(OperatorKind k) { return k == OperatorKind::L1 ? "L1" : "L2"; }
const char* to_string(KernelKind k) { return k == KernelKind::exponential ? "exponential" : "gaussian"; }

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg, const ScenarioOutcome& out,
                    const std::string& error)
{
    nlohmann::ordered_json j;
    j["scenario"] = bec::to_string(cfg.scenario);
    j["grid"] = {{"dim_r", cfg.grid.dim_r}, {"dim_p", cfg.grid.dim_p},       {"n_r", cfg.grid.n_r},
                 {"n_p", cfg.grid.n_p},     {"length_r", cfg.grid.length_r}, {"p_max", cfg.grid.p_max}};
    if (cfg.grid.p_shift) j["grid"]["p_shift"] = *cfg.grid.p_shift;
    j["model"] = {{"operator", to_string(cfg.operator_kind)},
                  {"kernel", to_string(cfg.kernel_kind)},
                  {"epsilon", cfg.epsilon},
                  {"l2_form", cfg.l2_form == L2Form::divergence ? "divergence" : "literal"},
                  {"nc_constant", cfg.nc_constant}};
    j["time"] = {{"dt", cfg.dt}, {"t_end", cfg.t_end}};
    j["initial"] = {{"amplitude", cfg.amplitude}, {"mass", cfg.mass}, {"mode", cfg.mode},
                    {"wave_amplitude", cfg.wave_amplitude}, {"wave_mode", cfg.wave_mode}, {"seed", cfg.seed}};
    j["small_data_delta"] = cfg.small_data_delta;
    j["samples"] = out.series.size();
    j["passed"] = out.passed() && error.empty();
    if (!error.empty()) j["error"] = error;
    std::ofstream os(path);
    os << j.dump(2) << '\n';
}

} // namespace

int run(const RunConfig& cfg, RunArtifacts* artifacts)
{
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    RunArtifacts local;
    RunArtifacts& art = artifacts ? *artifacts : local;
    art.manifest = dir / "manifest.json";
    art.series_csv = dir / "series.csv";
    art.report_json = dir / "report.json";
    art.report_csv = dir / "report.csv";

    const SnapshotHook hook = [&](long step, const CouplingModel& model, const CouplingState& s) {
        fs::create_directories(dir / "snapshots");
        char tag[32];
        std::snprintf(tag, sizeof tag, "%06ld", step);
        const fs::path f_stem = dir / "snapshots" / (std::string("f_") + tag);
        const fs::path w_stem = dir / "snapshots" / (std::string("psi_") + tag);
        write_phase_snapshot(f_stem, model.kinetic(), s.f);
        write_wave_snapshot(w_stem, model.nls(), s.psi);
        art.snapshots.push_back(f_stem);
        art.snapshots.push_back(w_stem);
    };

    ScenarioOutcome out;
    const auto flush = [&](const std::string& error) {
        write_manifest(art.manifest, cfg, out, error);
        if (out.has_series) {
            std::ofstream os(art.series_csv);
            out.series.write_csv(os);
        }
        std::ofstream rj(art.report_json);
        write_report_json(rj, out.checks, out.metrics);
        std::ofstream rc(art.report_csv);
        write_report_csv(rc, out.checks);
    };
    try {
        run_scenario(cfg, out, cfg.dump == DumpMode::none ? SnapshotHook{} : hook);
    } catch (const std::exception& e) {
        const std::string msg = "scenario " + bec::to_string(cfg.scenario) + " aborted: " + e.what();
        out.checks.push_back({"completed", "run finishes", 0.0, 0.0, false, msg});
        flush(msg);
        std::throw_with_nested(std::runtime_error(msg));
    }
    flush({});
    for (const auto& c : out.checks)
        spdlog::info("{} {}: measured {} (target {})", c.passed ? "PASS" : "FAIL", c.name, c.measured, c.target);
    return out.passed() ? 0 : 1;
}

} // namespace bec
