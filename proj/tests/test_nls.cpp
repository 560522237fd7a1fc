#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "bec/nls.hpp"
#include "oracles.hpp"

using namespace bec;
using std::numbers::pi;

namespace {

GridSpec spatial(int dim, int n, double length = 2 * pi)
{
    GridSpec g;
    g.dim_r = dim;
    g.dim_p = 3;
    g.n_r = n;
    g.n_p = 4;
    g.length_r = length;
    return g;
}

double max_abs(const ComplexField& a)
{
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

TEST_SUITE("nls") {

TEST_CASE("background is a fixed point when W = -1")
{
    const Grid grid(spatial(2, 8));
    const NlsModel nls(grid);
    WaveField w = nls.background();
    const RealField W(grid.spatial_size(), -1.0);
    for (int n = 0; n < 50; ++n) nls.step(w, W, 0.1);
    for (const auto& z : w.psi) CHECK(std::abs(z - 1.0) < 1e-14);
    CHECK(w.time == doctest::Approx(5.0));
}

TEST_CASE("mass is conserved for any real potential")
{
    const Grid grid(spatial(1, 32, 5.0));
    const NlsModel nls(grid);
    const auto noise = oracle::random_field(32, 61);
    WaveField w{ComplexField(noise.begin(), noise.end()), 0.0};
    RealField W(32);
    for (std::size_t i = 0; i < 32; ++i) W[i] = std::sin(2 * pi * grid.position(i)[0] / 5.0) - 1.0;
    const double m0 = nls.mass(w);
    for (int n = 0; n < 200; ++n) nls.step(w, W, 0.01);
    CHECK(nls.mass(w) == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("plane waves evolve with the exact phase")
{
    const double L = 2 * pi;
    const Grid grid(spatial(1, 16, L));
    const NlsModel nls(grid);
    const double A = 0.7, k = 3.0, Wc = -0.4, T = 1.3;
    WaveField w{ComplexField(16), 0.0};
    for (std::size_t j = 0; j < 16; ++j) w.psi[j] = A * std::polar(1.0, k * grid.position(j)[0]);
    const RealField W(16, Wc);
    for (int n = 0; n < 13; ++n) nls.step(w, W, T / 13);
    for (std::size_t j = 0; j < 16; ++j) {
        const Complex exact = A * std::polar(1.0, k * grid.position(j)[0] - (k * k + A * A + Wc) * T);
        CHECK(std::abs(w.psi[j] - exact) < 1e-12);
    }
}

TEST_CASE("perturbation views round-trip and define v = u1 + i U u2")
{
    const Grid grid(spatial(1, 16));
    const NlsModel nls(grid);
    RealField u1(16), u2(16);
    for (std::size_t j = 0; j < 16; ++j) {
        const double x = grid.position(j)[0];
        u1[j] = 0.1 * std::cos(x) + 0.05;
        u2[j] = 0.2 * std::sin(2 * x);
    }
    const WaveField w = nls.from_perturbation(u1, u2);
    for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(w.psi[j] - Complex(1.0 + u1[j], -u2[j])) < 1e-15);
    const auto views = nls.to_views(w);
    for (std::size_t j = 0; j < 16; ++j) {
        CHECK(views.u1[j] == doctest::Approx(u1[j]).epsilon(1e-15));
        CHECK(views.u2[j] == doctest::Approx(u2[j]).epsilon(1e-15));
        // U(2) = 2 / sqrt(6) on the single mode of u2.
        const double uu2 = 2.0 / std::sqrt(6.0) * u2[j];
        CHECK(std::abs(views.v[j] - Complex(u1[j], uu2)) < 1e-14);
    }
}

TEST_CASE("perturbation rates equal the NLS with u = u1 + i u2 and W = -1 + V")
{
    const Grid grid(spatial(1, 32));
    const NlsModel nls(grid);
    RealField u1(32), u2(32), V(32), lap_u1(32), lap_u2(32);
    for (std::size_t j = 0; j < 32; ++j) {
        const double x = grid.position(j)[0];
        u1[j] = 0.2 * std::cos(x) + 0.1 * std::sin(2 * x);
        u2[j] = 0.15 * std::cos(2 * x) - 0.1 * std::sin(x) + 0.05;
        lap_u1[j] = -0.2 * std::cos(x) - 0.4 * std::sin(2 * x);
        lap_u2[j] = -0.6 * std::cos(2 * x) + 0.1 * std::sin(x);
        V[j] = 0.3 * std::cos(x);
    }
    for (const RealField* pot : std::array<const RealField*, 2>{nullptr, &V}) {
        const auto [d1, d2] = perturbation_rates(nls, u1, u2, pot);
        for (std::size_t j = 0; j < 32; ++j) {
            const Complex psi(1.0 + u1[j], u2[j]);
            const Complex lap(lap_u1[j], lap_u2[j]);
            const double v = pot ? (*pot)[j] : 0.0;
            // i psi_t = -lap psi + (|psi|^2 - 1 + V) psi
            const Complex rhs = -lap + (std::norm(psi) - 1.0 + v) * psi;
            const Complex psi_t = Complex(0.0, -1.0) * rhs;
            CHECK(d1[j] == doctest::Approx(psi_t.real()).epsilon(1e-12));
            CHECK(d2[j] == doctest::Approx(psi_t.imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("normal-form residual is cubic in the amplitude")
{
    const Grid grid(spatial(1, 16));
    const NlsModel nls(grid);
    RealField a(16), b(16);
    for (std::size_t j = 0; j < 16; ++j) {
        const double x = grid.position(j)[0];
        a[j] = std::cos(x) + 0.5 * std::sin(2 * x) + 0.3;
        b[j] = 0.7 * std::sin(x) - 0.4 * std::cos(2 * x);
    }
    const auto residual = [&](double eps, const NormalFormOptions& opt) {
        RealField u1 = a, u2 = b;
        for (auto& x : u1) x *= eps;
        for (auto& x : u2) x *= eps;
        return max_abs(normal_form_residual(nls, u1, u2, nullptr, opt));
    };
    const NormalFormOptions rederived;
    const double slope = std::log10(residual(1e-2, rederived) / residual(1e-3, rederived));
    CHECK(slope > 2.9);
    NormalFormOptions printed;
    printed.b1 = QuadraticTable::printed;
    const double slope_printed = std::log10(residual(1e-2, printed) / residual(1e-3, printed));
    CHECK(slope_printed < 2.1);
    NormalFormOptions consistent{QuadraticTable::rederived, QuarticTerm::quartic, CubicTable::all_slots};
    CHECK(residual(1e-2, consistent) < 1e-12);
}

TEST_CASE("J weight at t = 0 multiplies by the signed position")
{
    const Grid grid(spatial(1, 16));
    const NlsModel nls(grid);
    const auto noise = oracle::random_field(16, 71);
    const ComplexField f(noise.begin(), noise.end());
    const auto jf = nls.j_weight(f, 0.0);
    REQUIRE(jf.size() == 1);
    for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(jf[0][j] - grid.signed_position(j)[0] * f[j]) < 1e-13);
    CHECK(nls.x_norm(f, 0.0) > nls.spectral().h1_norm(f));
    // J commutes with the free flow: ||J e^{-itH} f||(t) equals ||r f||.
    const auto prop = nls.symbols().h_propagator(0.6);
    const ComplexField g = apply_multiplier(nls.spectral(), f, std::span<const Complex>(prop));
    const auto jg = nls.j_weight(g, 0.6);
    CHECK(nls.spectral().l2_norm(jg[0]) == doctest::Approx(nls.spectral().l2_norm(apply_multiplier(
                                                  nls.spectral(), jf[0], std::span<const Complex>(prop)))).epsilon(1e-12));
}

TEST_CASE("S seminorm of a single mode")
{
    const Grid grid(spatial(1, 16));
    const NlsModel nls(grid);
    ComplexField z(16);
    for (std::size_t j = 0; j < 16; ++j) z[j] = std::polar(1.0, grid.position(j)[0]);
    // |(1 - Delta)^{1/2} U^{-1/6} e^{ix}| = sqrt(2) U(1)^{-1/6}, U(1) = 1/sqrt(3).
    const double amp = std::sqrt(2.0) * std::pow(1.0 / std::sqrt(3.0), -1.0 / 6.0);
    CHECK(nls.s_seminorm(z) == doctest::Approx(amp * std::pow(2 * pi, 1.0 / 6.0)).epsilon(1e-12));
}

}
