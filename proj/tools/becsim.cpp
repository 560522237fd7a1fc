// Scenario runner for the kinetic / condensate model.
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "bec/config.hpp"
#include "bec/scenarios.hpp"

namespace {

void print_nested(const std::exception& e, int depth = 0)
{
    std::cerr << std::string(static_cast<std::size_t>(depth) * 2, ' ') << e.what() << '\n';
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        print_nested(inner, depth + 1);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"becsim: run a named scenario from an INI config"};
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool check = false;
    std::string dump;
    std::string log_level = "info";
    app.add_option("config", config_path, "scenario config (INI)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--seed", seed, "random seed (overrides initial.seed)");
    app.add_flag("--check", check, "evaluate the scenario's acceptance checks and set the exit code from them");
    app.add_option("--dump-fields", dump, "snapshot policy: none, final or every-K");
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");
    CLI11_PARSE(app, argc, argv);

    spdlog::set_level(spdlog::level::from_str(log_level));

    bec::RunConfig cfg;
    try {
        cfg = bec::load_config(config_path);
        if (!dump.empty()) bec::set_dump_mode(cfg, dump);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
    } catch (const bec::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        const int status = bec::run(cfg);
        std::cout << bec::to_string(cfg.scenario) << ": " << (status == 0 ? "all checks passed" : "checks failed")
                  << " (outputs in " << cfg.out_dir << ")\n";
        return check ? status : 0;
    } catch (const std::exception& e) {
        print_nested(e);
        return 2;
    }
}
