#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "bec/config.hpp"
#include "bec/io.hpp"

using namespace bec;

namespace {

bool mentions(const ConfigError& e, const std::string& needle)
{
    return std::any_of(e.errors().begin(), e.errors().end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("bec_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes the scenario defaults")
{
    const RunConfig cfg = parse_config("scenario = l2_decay\n");
    CHECK(cfg.scenario == Scenario::l2_decay);
    CHECK(cfg.grid.dim_p == 3);
    CHECK(cfg.epsilon == 0.0);
    CHECK(cfg.operator_kind == OperatorKind::L2);
    CHECK(validate(cfg).empty());
}

TEST_CASE("explicit keys override the defaults")
{
    const RunConfig cfg = parse_config("scenario = coupled_smalldata\n"
                                       "[grid]\nn_r = 8\nn_p = 16\n"
                                       "[model]\noperator = L1\nepsilon = 0.25\n"
                                       "[time]\ndt = 0.02\nt_end = 0.2\n"
                                       "[initial]\nseed = 99\n"
                                       "[output]\ndump = every-5\n");
    CHECK(cfg.grid.n_r == 8);
    CHECK(cfg.grid.n_p == 16);
    CHECK(cfg.operator_kind == OperatorKind::L1);
    CHECK(cfg.epsilon == 0.25);
    CHECK(cfg.dt == 0.02);
    CHECK(cfg.seed == 99u);
    CHECK(cfg.dump == DumpMode::every);
    CHECK(cfg.dump_every == 5);
}

TEST_CASE("a negative time step is rejected and the error names the key")
{
    try {
        parse_config("scenario = l1_relaxation\n[time]\ndt = -0.1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "time.dt"));
    }
}

TEST_CASE("unknown keys and sections are rejected")
{
    try {
        parse_config("scenario = l1_relaxation\n[grid]\nfoo = 1\n[extra]\nbar = 2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "foo"));
        CHECK(mentions(e, "extra"));
    }
}

TEST_CASE("unknown or missing scenario is rejected")
{
    CHECK_THROWS_AS(parse_config("scenario = warp_drive\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nn_r = 8\n"), ConfigError);
    CHECK_FALSE(parse_scenario("warp_drive").has_value());
    CHECK(parse_scenario("picard") == Scenario::picard);
    CHECK(to_string(Scenario::normal_form_residual) == "normal_form_residual");
}

TEST_CASE("malformed values are collected together")
{
    try {
        parse_config("scenario = l1_relaxation\n[grid]\nn_r = seven\n[model]\noperator = L3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.errors().size() >= 2u);
        CHECK(mentions(e, "grid.n_r"));
        CHECK(mentions(e, "model.operator"));
    }
}

TEST_CASE("validation catches inconsistent grids")
{
    RunConfig cfg = default_config(Scenario::l1_relaxation);
    cfg.grid.n_r = 7;
    CHECK_FALSE(validate(cfg).empty());
    cfg = default_config(Scenario::l1_relaxation);
    cfg.epsilon = 0.0; // 1-D momentum needs eps > 0
    CHECK_FALSE(validate(cfg).empty());
}

TEST_CASE("dump mode parsing")
{
    RunConfig cfg = default_config(Scenario::picard);
    set_dump_mode(cfg, "final");
    CHECK(cfg.dump == DumpMode::final);
    set_dump_mode(cfg, "every-3");
    CHECK(cfg.dump == DumpMode::every);
    CHECK(cfg.dump_every == 3);
    CHECK_THROWS_AS(set_dump_mode(cfg, "every-0"), ConfigError);
    CHECK_THROWS_AS(set_dump_mode(cfg, "sometimes"), ConfigError);
}

TEST_CASE("load_config reads a file and reports a missing one")
{
    const auto dir = scratch_dir("config");
    {
        std::ofstream(dir / "run.ini") << "scenario = nls_equilibrium\n";
    }
    CHECK(load_config((dir / "run.ini").string()).scenario == Scenario::nls_equilibrium);
    CHECK_THROWS(load_config((dir / "missing.ini").string()));
}

}

TEST_SUITE("io") {

TEST_CASE("float64 arrays round-trip byte for byte")
{
    const auto dir = scratch_dir("io");
    const RealField data{1.0, -2.5, 3.14159, 1e-300, -0.0};
    write_f64_le(dir / "a.bin", data.data(), data.size());
    CHECK(std::filesystem::file_size(dir / "a.bin") == 40u);
    const RealField back = read_f64_le(dir / "a.bin");
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(std::memcmp(&back[i], &data[i], sizeof(double)) == 0);
}

TEST_CASE("snapshots write a binary payload and a sidecar")
{
    const auto dir = scratch_dir("snap");
    GridSpec spec;
    spec.dim_r = 1;
    spec.dim_p = 1;
    spec.n_r = 4;
    spec.n_p = 8;
    spec.p_max = 6.0;
    const Grid grid(spec);
    const KineticModel km(grid, 0.5);
    const PhaseSpaceField f = km.equilibrium_field(km.equilibrium(2.0));
    write_phase_snapshot(dir / "f", km, f);
    const RealField back = read_f64_le(dir / "f.bin");
    CHECK(back == f.values);
    std::ifstream js(dir / "f.json");
    const auto meta = nlohmann::json::parse(js);
    CHECK(meta["mass"].get<double>() == doctest::Approx(2.0));

    const NlsModel nls(grid);
    write_wave_snapshot(dir / "psi", nls, nls.background());
    const RealField psi = read_f64_le(dir / "psi.bin");
    REQUIRE(psi.size() == 8u);
    CHECK(psi[0] == 1.0);
    CHECK(psi[1] == 0.0);
    CHECK(std::filesystem::exists(dir / "psi.json"));
}

}
