#include "bec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bec {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"grid", {"dim_r", "dim_p", "n_r", "n_p", "length_r", "p_max", "p_shift"}},
        {"model", {"operator", "kernel", "epsilon", "l2_form", "nc_constant", "b1_table", "q1_form", "c4_table"}},
        {"time", {"dt", "t_end"}},
        {"initial", {"preset", "pattern", "amplitude", "mass", "mode", "bump_center", "bump_width", "wave",
                     "wave_amplitude", "wave_mode", "seed"}},
        {"output", {"directory", "dump"}},
        {"tolerance", {"mass_drift", "relaxation", "rate_fraction", "r2_decay", "r2_rho", "poincare_min",
                       "residual_slope", "oracle", "order_lo", "order_hi", "picard_ratio", "picard_match",
                       "sup_growth", "equilibrium_drift"}},
        {"diagnostics", {"energy_delta", "small_data_delta", "poincare_trials", "gradient", "picard_iterations",
                         "fit_t_lo", "fit_t_hi", "order_check", "residual_eps"}},
    };
    return keys;
}

template <class Enum>
struct Names {
    std::vector<std::pair<std::string, Enum>> entries;
    std::string list() const
    {
        std::string s;
        for (const auto& [name, v] : entries) s += (s.empty() ? "" : "|") + name;
        return s;
    }
};

const Names<Scenario> scenario_names{{{"l1_relaxation", Scenario::l1_relaxation},
                                      {"l2_decay", Scenario::l2_decay},
                                      {"poincare_check", Scenario::poincare_check},
                                      {"normal_form_residual", Scenario::normal_form_residual},
                                      {"nls_equilibrium", Scenario::nls_equilibrium},
                                      {"coupled_smalldata", Scenario::coupled_smalldata},
                                      {"picard", Scenario::picard}}};

class Reader {
public:
    Reader(const pt::ptree& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

    std::optional<std::string> raw(const std::string& key) const
    {
        auto v = root_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (v) {
            auto s = *v;
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        }
        return std::nullopt;
    }

    void number(const std::string& key, double& out) const
    {
        auto s = raw(key);
        if (!s) return;
        try {
            std::size_t used = 0;
            double v = std::stod(*s, &used);
            if (used != s->size() || !std::isfinite(v)) throw std::invalid_argument(*s);
            out = v;
        } catch (const std::exception&) {
            errors_.push_back(key + ": expected a number, got '" + *s + "'");
        }
    }

    void number(const std::string& key, std::optional<double>& out) const
    {
        if (!raw(key)) return;
        double v = 0.0;
        number(key, v);
        out = v;
    }

    template <class Int>
    void integer(const std::string& key, Int& out) const
    {
        auto s = raw(key);
        if (!s) return;
        try {
            std::size_t used = 0;
            long long v = std::stoll(*s, &used);
            if (used != s->size()) throw std::invalid_argument(*s);
            if constexpr (std::is_unsigned_v<Int>) {
                if (v < 0) throw std::out_of_range(*s);
            }
            out = static_cast<Int>(v);
        } catch (const std::exception&) {
            errors_.push_back(key + ": expected an integer, got '" + *s + "'");
        }
    }

    void boolean(const std::string& key, bool& out) const
    {
        auto s = raw(key);
        if (!s) return;
        if (*s == "true" || *s == "1" || *s == "yes") out = true;
        else if (*s == "false" || *s == "0" || *s == "no") out = false;
        else errors_.push_back(key + ": expected true|false, got '" + *s + "'");
    }

    void text(const std::string& key, std::string& out) const
    {
        if (auto s = raw(key)) out = *s;
    }

    template <class Enum>
    void choice(const std::string& key, const Names<Enum>& names, Enum& out) const
    {
        auto s = raw(key);
        if (!s) return;
        for (const auto& [name, v] : names.entries) {
            if (name == *s) {
                out = v;
                return;
            }
        }
        errors_.push_back(key + ": expected one of " + names.list() + ", got '" + *s + "'");
    }

    void list(const std::string& key, std::vector<double>& out) const
    {
        auto s = raw(key);
        if (!s) return;
        std::vector<double> values;
        std::stringstream ss(*s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                auto b = item.find_first_not_of(" \t");
                item = b == std::string::npos ? "" : item.substr(b);
                values.push_back(std::stod(item, &used));
                if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                errors_.push_back(key + ": expected a comma-separated list of numbers, got '" + *s + "'");
                return;
            }
        }
        out = values;
    }

private:
    const pt::ptree& root_;
    std::vector<std::string>& errors_;
};

void parse_dump(const std::string& key, const std::string& s, RunConfig& cfg, std::vector<std::string>& errors)
{
    if (s == "none") {
        cfg.dump = DumpMode::none;
    } else if (s == "final") {
        cfg.dump = DumpMode::final;
    } else if (s.rfind("every-", 0) == 0) {
        try {
            std::size_t used = 0;
            int k = std::stoi(s.substr(6), &used);
            if (used != s.size() - 6 || k <= 0) throw std::invalid_argument(s);
            cfg.dump = DumpMode::every;
            cfg.dump_every = k;
        } catch (const std::exception&) {
            errors.push_back(key + ": expected every-K with K a positive integer, got '" + s + "'");
        }
    } else {
        errors.push_back(key + ": expected none|final|every-K, got '" + s + "'");
    }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors))
{
}

std::string to_string(Scenario s)
{
    for (const auto& [name, v] : scenario_names.entries)
        if (v == s) return name;
    return "unknown";
}

std::optional<Scenario> parse_scenario(const std::string& name)
{
    for (const auto& [n, v] : scenario_names.entries)
        if (n == name) return v;
    return std::nullopt;
}

RunConfig default_config(Scenario s)
{
    RunConfig c;
    c.scenario = s;
    c.grid.dim_r = 1;
    c.grid.dim_p = 1;
    c.grid.n_r = 32;
    c.grid.n_p = 64;
    c.grid.p_max = 24.0;
    c.epsilon = 0.5;
    switch (s) {
    case Scenario::l1_relaxation:
        c.grid.n_r = 8;
        c.preset = InitialPreset::gaussian_bump;
        c.amplitude = 1.0;
        c.wave = WavePreset::background;
        c.dt = 0.05;
        c.t_end = 2.0;
        break;
    case Scenario::l2_decay:
    case Scenario::poincare_check:
        // 3-D momentum: the 1/4 Poincare constant is dimension specific.
        c.grid.dim_p = 3;
        c.grid.n_r = 8;
        c.grid.n_p = 24;
        c.grid.p_max = 26.0;
        c.epsilon = 0.0;
        c.operator_kind = OperatorKind::L2;
        c.pattern = MomentumPattern::odd;
        c.amplitude = 0.1;
        c.wave = WavePreset::background;
        c.dt = 0.1;
        c.t_end = 10.0;
        break;
    case Scenario::normal_form_residual:
        c.grid.n_r = 16;
        c.grid.n_p = 8;
        c.wave = WavePreset::random_smooth;
        break;
    case Scenario::nls_equilibrium:
        c.amplitude = 0.0;
        c.wave = WavePreset::background;
        c.wave_amplitude = 0.0;
        c.dt = 0.05;
        c.t_end = 5.0;
        break;
    case Scenario::coupled_smalldata:
        // The density deviation is a damped oscillation; past t ~ 9 the slow
        // relaxation of the L2 mass drift (~1e-9) takes over the log slope.
        c.operator_kind = OperatorKind::L2;
        c.preset = InitialPreset::random_smooth;
        c.amplitude = 0.01;
        c.wave_amplitude = 1e-3;
        c.dt = 0.05;
        c.t_end = 9.0;
        break;
    case Scenario::picard:
        c.grid.n_r = 16;
        c.grid.n_p = 64;
        c.operator_kind = OperatorKind::L2;
        c.amplitude = 0.05;
        c.wave_amplitude = 0.02;
        c.dt = 0.05;
        c.t_end = 1.0;
        break;
    }
    return c;
}

std::vector<std::string> validate(const RunConfig& c)
{
    std::vector<std::string> e;
    auto positive = [&](const char* key, double v) {
        if (!(v > 0.0)) e.push_back(std::string(key) + ": must be positive, got " + std::to_string(v));
    };
    auto non_negative = [&](const char* key, double v) {
        if (!(v >= 0.0)) e.push_back(std::string(key) + ": must be non-negative, got " + std::to_string(v));
    };
    if (c.grid.dim_r < 1 || c.grid.dim_r > 3) e.push_back("grid.dim_r: must be 1, 2 or 3");
    if (c.grid.dim_p < 1 || c.grid.dim_p > 3) e.push_back("grid.dim_p: must be 1, 2 or 3");
    if (c.grid.dim_p < c.grid.dim_r) e.push_back("grid.dim_p: must be at least grid.dim_r");
    if (c.grid.n_r < 2 || c.grid.n_r % 2) e.push_back("grid.n_r: must be an even integer >= 2");
    if (c.grid.n_p < 2 || c.grid.n_p % 2) e.push_back("grid.n_p: must be an even integer >= 2");
    positive("grid.length_r", c.grid.length_r);
    positive("grid.p_max", c.grid.p_max);
    non_negative("model.epsilon", c.epsilon);
    if (c.epsilon == 0.0 && c.grid.dim_p < 3)
        e.push_back("model.epsilon: 0 is only integrable for grid.dim_p = 3");
    positive("model.nc_constant", c.nc_constant);
    positive("time.dt", c.dt);
    positive("time.t_end", c.t_end);
    if (c.dt > 0.0 && c.t_end > 0.0 && c.dt > c.t_end) e.push_back("time.dt: must not exceed time.t_end");
    non_negative("initial.amplitude", c.amplitude);
    positive("initial.mass", c.mass);
    if (c.mode < 1) e.push_back("initial.mode: must be >= 1");
    positive("initial.bump_width", c.bump_width);
    non_negative("initial.wave_amplitude", c.wave_amplitude);
    if (c.wave_mode < 1) e.push_back("initial.wave_mode: must be >= 1");
    if (c.mode > c.grid.n_r / 2 - 1) e.push_back("initial.mode: must be below the spatial Nyquist mode");
    if (c.wave_mode > c.grid.n_r / 2 - 1) e.push_back("initial.wave_mode: must be below the spatial Nyquist mode");
    if (c.out_dir.empty()) e.push_back("output.directory: must not be empty");
    positive("tolerance.mass_drift", c.tol.mass_drift);
    positive("tolerance.relaxation", c.tol.relaxation);
    positive("tolerance.rate_fraction", c.tol.rate_fraction);
    positive("tolerance.r2_decay", c.tol.r2_decay);
    positive("tolerance.r2_rho", c.tol.r2_rho);
    positive("tolerance.poincare_min", c.tol.poincare_min);
    positive("tolerance.residual_slope", c.tol.residual_slope);
    positive("tolerance.oracle", c.tol.oracle);
    positive("tolerance.order_lo", c.tol.order_lo);
    if (!(c.tol.order_hi > c.tol.order_lo)) e.push_back("tolerance.order_hi: must exceed tolerance.order_lo");
    positive("tolerance.picard_ratio", c.tol.picard_ratio);
    positive("tolerance.picard_match", c.tol.picard_match);
    positive("tolerance.sup_growth", c.tol.sup_growth);
    positive("tolerance.equilibrium_drift", c.tol.equilibrium_drift);
    positive("diagnostics.energy_delta", c.energy_delta);
    positive("diagnostics.small_data_delta", c.small_data_delta);
    if (c.poincare_trials < 1) e.push_back("diagnostics.poincare_trials: must be >= 1");
    if (c.picard_iterations < 2) e.push_back("diagnostics.picard_iterations: must be >= 2");
    if (c.fit_t_lo && c.fit_t_hi && !(*c.fit_t_hi > *c.fit_t_lo))
        e.push_back("diagnostics.fit_t_hi: must exceed diagnostics.fit_t_lo");
    if (c.residual_eps.size() < 2) e.push_back("diagnostics.residual_eps: needs at least two values");
    for (double v : c.residual_eps)
        if (!(v > 0.0)) {
            e.push_back("diagnostics.residual_eps: values must be positive");
            break;
        }
    return e;
}

RunConfig parse_config(const std::string& text)
{
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& ex) {
        throw ConfigError({std::string("syntax: ") + ex.message() + " (line " + std::to_string(ex.line()) + ")"});
    }

    std::vector<std::string> errors;
    std::optional<Scenario> scenario;
    for (const auto& [key, node] : root) {
        if (node.empty()) {
            if (key == "scenario") {
                scenario = parse_scenario(node.data());
                if (!scenario)
                    errors.push_back("scenario: unknown scenario '" + node.data() + "', expected one of " +
                                     scenario_names.list());
            } else {
                errors.push_back(key + ": unknown key");
            }
            continue;
        }
        auto section = known_keys().find(key);
        if (section == known_keys().end()) {
            errors.push_back("[" + key + "]: unknown section");
            continue;
        }
        for (const auto& [sub, value] : node) {
            if (!section->second.count(sub)) errors.push_back(key + "." + sub + ": unknown key");
        }
    }
    if (!root.get_child_optional("scenario")) errors.push_back("scenario: missing required key");

    RunConfig c = default_config(scenario.value_or(Scenario::l1_relaxation));
    Reader r(root, errors);

    r.integer("grid.dim_r", c.grid.dim_r);
    r.integer("grid.dim_p", c.grid.dim_p);
    r.integer("grid.n_r", c.grid.n_r);
    r.integer("grid.n_p", c.grid.n_p);
    r.number("grid.length_r", c.grid.length_r);
    r.number("grid.p_max", c.grid.p_max);
    r.number("grid.p_shift", c.grid.p_shift);

    r.choice("model.operator", Names<OperatorKind>{{{"L1", OperatorKind::L1}, {"L2", OperatorKind::L2}}},
             c.operator_kind);
    r.choice("model.kernel",
             Names<KernelKind>{{{"exponential", KernelKind::exponential}, {"gaussian", KernelKind::gaussian}}},
             c.kernel_kind);
    r.number("model.epsilon", c.epsilon);
    r.choice("model.l2_form", Names<L2Form>{{{"divergence", L2Form::divergence}, {"literal", L2Form::literal}}},
             c.l2_form);
    r.number("model.nc_constant", c.nc_constant);
    r.choice("model.b1_table",
             Names<QuadraticTable>{{{"rederived", QuadraticTable::rederived}, {"printed", QuadraticTable::printed}}},
             c.normal_form.b1);
    r.choice("model.q1_form", Names<QuarticTerm>{{{"printed", QuarticTerm::printed}, {"quartic", QuarticTerm::quartic}}},
             c.normal_form.q1);
    r.choice("model.c4_table", Names<CubicTable>{{{"printed", CubicTable::printed}, {"all_slots", CubicTable::all_slots}}},
             c.normal_form.c4);

    r.number("time.dt", c.dt);
    r.number("time.t_end", c.t_end);

    r.choice("initial.preset",
             Names<InitialPreset>{{{"equilibrium-plus-mode", InitialPreset::equilibrium_plus_mode},
                                   {"gaussian-bump", InitialPreset::gaussian_bump},
                                   {"random-smooth", InitialPreset::random_smooth}}},
             c.preset);
    r.choice("initial.pattern", Names<MomentumPattern>{{{"even", MomentumPattern::even}, {"odd", MomentumPattern::odd}}},
             c.pattern);
    r.number("initial.amplitude", c.amplitude);
    r.number("initial.mass", c.mass);
    r.integer("initial.mode", c.mode);
    r.number("initial.bump_center", c.bump_center);
    r.number("initial.bump_width", c.bump_width);
    r.choice("initial.wave",
             Names<WavePreset>{{{"background", WavePreset::background},
                                {"traveling-mode", WavePreset::traveling_mode},
                                {"random-smooth", WavePreset::random_smooth}}},
             c.wave);
    r.number("initial.wave_amplitude", c.wave_amplitude);
    r.integer("initial.wave_mode", c.wave_mode);
    r.integer("initial.seed", c.seed);

    r.text("output.directory", c.out_dir);
    if (auto d = r.raw("output.dump")) parse_dump("output.dump", *d, c, errors);

    r.number("tolerance.mass_drift", c.tol.mass_drift);
    r.number("tolerance.relaxation", c.tol.relaxation);
    r.number("tolerance.rate_fraction", c.tol.rate_fraction);
    r.number("tolerance.r2_decay", c.tol.r2_decay);
    r.number("tolerance.r2_rho", c.tol.r2_rho);
    r.number("tolerance.poincare_min", c.tol.poincare_min);
    r.number("tolerance.residual_slope", c.tol.residual_slope);
    r.number("tolerance.oracle", c.tol.oracle);
    r.number("tolerance.order_lo", c.tol.order_lo);
    r.number("tolerance.order_hi", c.tol.order_hi);
    r.number("tolerance.picard_ratio", c.tol.picard_ratio);
    r.number("tolerance.picard_match", c.tol.picard_match);
    r.number("tolerance.sup_growth", c.tol.sup_growth);
    r.number("tolerance.equilibrium_drift", c.tol.equilibrium_drift);

    r.number("diagnostics.energy_delta", c.energy_delta);
    r.number("diagnostics.small_data_delta", c.small_data_delta);
    r.integer("diagnostics.poincare_trials", c.poincare_trials);
    r.choice("diagnostics.gradient", Names<GradientKind>{{{"face", GradientKind::face}, {"centered", GradientKind::centered}}},
             c.gradient);
    r.integer("diagnostics.picard_iterations", c.picard_iterations);
    r.number("diagnostics.fit_t_lo", c.fit_t_lo);
    r.number("diagnostics.fit_t_hi", c.fit_t_hi);
    r.boolean("diagnostics.order_check", c.order_check);
    r.list("diagnostics.residual_eps", c.residual_eps);

    auto range = validate(c);
    errors.insert(errors.end(), range.begin(), range.end());
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

void set_dump_mode(RunConfig& cfg, const std::string& value)
{
    std::vector<std::string> errors;
    parse_dump("dump-fields", value, cfg, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace bec
