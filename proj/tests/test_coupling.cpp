#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bec/coupling.hpp"

using namespace bec;
using std::numbers::pi;

namespace {

GridSpec small_grid()
{
    GridSpec g;
    g.dim_r = 1;
    g.dim_p = 1;
    g.n_r = 16;
    g.n_p = 32;
    g.length_r = 2 * pi;
    g.p_max = 16.0;
    return g;
}

PhaseSpaceField perturbed(const CouplingModel& m, double a)
{
    const Grid& g = m.grid();
    const auto& e = m.kinetic().weight();
    PhaseSpaceField f;
    f.values.resize(g.phase_size());
    for (std::size_t r = 0; r < g.spatial_size(); ++r)
        for (std::size_t j = 0; j < g.momentum_size(); ++j) {
            const double x = g.position(r)[0], p = g.momentum(j)[0];
            f.values[r * g.momentum_size() + j] = e[j] * (1.0 + a * std::cos(x) * (0.5 + 0.5 * p / g.p_max()));
        }
    return f;
}

WaveField wave(const CouplingModel& m, double d)
{
    RealField u1(m.grid().spatial_size()), u2(m.grid().spatial_size());
    for (std::size_t r = 0; r < u1.size(); ++r) {
        const double x = m.grid().position(r)[0];
        u1[r] = d * std::cos(x);
        u2[r] = d * std::sin(2 * x);
    }
    return m.nls().from_perturbation(u1, u2);
}

} // namespace

TEST_SUITE("coupling") {

TEST_CASE("N_c is the normalized kernel convolution of |Psi|^2")
{
    CouplingOptions opt;
    const CouplingModel m(Grid(small_grid()), opt);
    CHECK(std::abs(m.compute_nc(m.nls().background())[3] - 1.0) < 1e-14);

    // |Psi|^2 = 1 + a cos(2x) with Psi real and positive.
    const double a = 0.4;
    WaveField w{ComplexField(16), 0.0};
    for (std::size_t r = 0; r < 16; ++r) w.psi[r] = std::sqrt(1.0 + a * std::cos(2 * m.grid().position(r)[0]));
    const RealField nc = m.compute_nc(w);
    const auto grad = m.grad_nc(w);
    // 1-D exponential kernel e^{-|r|}/2 has symbol 1 / (1 + k^2).
    const double s = 1.0 / (1.0 + 4.0);
    double grad_sup = 0.0;
    for (std::size_t r = 0; r < 16; ++r) {
        const double x = m.grid().position(r)[0];
        CHECK(nc[r] == doctest::Approx(1.0 + a * s * std::cos(2 * x)).epsilon(1e-13));
        CHECK(grad[0][r] == doctest::Approx(-2.0 * a * s * std::sin(2 * x)).scale(1.0).epsilon(1e-13));
        grad_sup = std::max(grad_sup, std::abs(grad[0][r]));
    }
    CHECK(m.grad_nc_sup(w) == doctest::Approx(grad_sup).epsilon(1e-13));
    CHECK(m.periodization_error() == doctest::Approx(std::exp(-pi)).epsilon(1e-12));
}

TEST_CASE("potentials: V = rho - M/Vol and W = -1 - V")
{
    const CouplingModel m(Grid(small_grid()), CouplingOptions{});
    RealField rho(16);
    for (std::size_t r = 0; r < 16; ++r) rho[r] = 2.0 + 0.1 * r;
    const auto [V, W] = m.build_potentials(rho, 4.0 * pi);
    for (std::size_t r = 0; r < 16; ++r) {
        CHECK(V[r] == doctest::Approx(rho[r] - 2.0));
        CHECK(W[r] == doctest::Approx(-1.0 - V[r]));
    }
}

TEST_CASE("equilibrium with background wave is stationary")
{
    for (OperatorKind kind : {OperatorKind::L1, OperatorKind::L2}) {
        CouplingOptions opt;
        opt.operator_kind = kind;
        const CouplingModel m(Grid(small_grid()), opt);
        const PhaseSpaceField f0 = perturbed(m, 0.0);
        CouplingState s = m.make_state(f0, m.nls().background());
        for (int n = 0; n < 20; ++n) m.step(s, 0.1);
        double df = 0.0, dpsi = 0.0;
        for (std::size_t i = 0; i < f0.values.size(); ++i) df = std::max(df, std::abs(s.f.values[i] - f0.values[i]));
        for (const auto& z : s.psi.psi) dpsi = std::max(dpsi, std::abs(z - 1.0));
        CHECK(df < 1e-13);
        CHECK(dpsi < 1e-13);
        CHECK(s.series.size() == 21u);
        CHECK(s.t == doctest::Approx(2.0));
    }
}

TEST_CASE("coupled L1 run conserves both masses")
{
    CouplingOptions opt;
    const CouplingModel m(Grid(small_grid()), opt);
    CouplingState s = m.make_state(perturbed(m, 0.3), wave(m, 0.05));
    for (int n = 0; n < 200; ++n) m.step(s, 0.05);
    const auto& mf = s.series.channel("mass_f");
    const auto& mp = s.series.channel("mass_psi");
    for (std::size_t i = 0; i < mf.size(); ++i) {
        CHECK(std::abs(mf[i] / mf.front() - 1.0) < 1e-12);
        CHECK(std::abs(mp[i] / mp.front() - 1.0) < 1e-12);
    }
    CHECK(s.series.channel("l_norm_dev").back() < s.series.channel("l_norm_dev").front());
}

TEST_CASE("Picard iterates converge to the stepped trajectory")
{
    CouplingOptions opt;
    opt.operator_kind = OperatorKind::L2;
    const CouplingModel m(Grid(small_grid()), opt);
    const PhaseSpaceField f0 = perturbed(m, 0.05);
    const WaveField psi0 = wave(m, 0.02);
    PicardOptions po;
    po.horizon = 0.5;
    po.dt = 0.05;
    po.iterations = 5;
    const PicardResult res = picard_iterate(m, f0, psi0, po);
    REQUIRE(res.d.size() >= 3);
    CHECK(res.d[1] < res.d[0]);
    CHECK(res.d[2] < res.d[1]);
    const auto stepped = stepped_trajectory(m, m.make_state(f0, psi0), 0.05, 10);
    const auto& last = res.psi.back();
    REQUIRE(last.size() == stepped.size());
    double dist = 0.0;
    for (std::size_t n = 0; n < stepped.size(); ++n) {
        ComplexField diff(stepped[n].psi.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = last[n].psi[i] - stepped[n].psi[i];
        dist = std::max(dist, m.spectral().l2_norm(diff));
    }
    CHECK(dist < 1e-12);
}

TEST_CASE("frozen N_c leaves the wave field untouched")
{
    CouplingOptions opt;
    opt.frozen_nc = 2.0;
    const CouplingModel m(Grid(small_grid()), opt);
    const WaveField psi0 = wave(m, 0.1);
    CouplingState s = m.make_state(perturbed(m, 0.2), psi0);
    for (int n = 0; n < 5; ++n) m.step(s, 0.1);
    for (std::size_t i = 0; i < psi0.psi.size(); ++i) CHECK(s.psi.psi[i] == psi0.psi[i]);
    for (double v : s.n_c) CHECK(v == 2.0);
}

TEST_CASE("vanishing condensate aborts with the last good state")
{
    const CouplingModel m(Grid(small_grid()), CouplingOptions{});
    WaveField zero{ComplexField(16, Complex{}), 0.0};
    CouplingState s = m.make_state(perturbed(m, 0.1), zero);
    try {
        m.step(s, 0.1);
        FAIL("expected CouplingAbort");
    } catch (const CouplingAbort& e) {
        CHECK(e.snapshot().step_count == 0);
        CHECK(e.snapshot().t == 0.0);
    }
}

TEST_CASE("mismatched fields are rejected")
{
    const CouplingModel m(Grid(small_grid()), CouplingOptions{});
    CHECK_THROWS_AS(m.make_state(PhaseSpaceField{RealField(7), 0.0}, m.nls().background()), DimensionError);
    CHECK_THROWS_AS(m.make_state(perturbed(m, 0.0), WaveField{ComplexField(8), 0.0}), DimensionError);
}

}
