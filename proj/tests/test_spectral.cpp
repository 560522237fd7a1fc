#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bec/spectral.hpp"
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

ComplexField as_field(const std::vector<oracle::cplx>& v) { return ComplexField(v.begin(), v.end()); }
std::vector<oracle::cplx> as_vec(const ComplexField& v) { return {v.begin(), v.end()}; }

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("forward transform matches the naive DFT in 1-D and 2-D")
{
    {
        const Grid grid(spatial(1, 16, 5.0));
        const Spectral sp(grid);
        const auto f = oracle::random_field(16, 1);
        const auto got = as_vec(sp.forward(as_field(f)));
        CHECK(oracle::max_abs_diff(got, oracle::dft_1d(f, 5.0)) < 1e-12);
        CHECK(oracle::max_abs_diff(as_vec(sp.inverse(as_field(got))), f) < 1e-13);
    }
    {
        const Grid grid(spatial(2, 8, 3.0));
        const Spectral sp(grid);
        const auto f = oracle::random_field(64, 2);
        const auto got = as_vec(sp.forward(as_field(f)));
        CHECK(oracle::max_abs_diff(got, oracle::dft_2d(f, 8, 3.0)) < 1e-12);
    }
}

TEST_CASE("Parseval: sum |f|^2 dr equals (1/V) sum |f^|^2")
{
    const Grid grid(spatial(3, 8, 4.0));
    const Spectral sp(grid);
    const auto f = as_field(oracle::random_field(grid.spatial_size(), 3));
    const auto fh = sp.forward(f);
    double spec = 0.0;
    for (const auto& z : fh) spec += std::norm(z);
    spec /= grid.volume_r();
    CHECK(sp.l2_norm(f) * sp.l2_norm(f) == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("lattice ordering and Nyquist handling")
{
    const Grid grid(spatial(1, 8, 2 * pi));
    CHECK(grid.mode(3)[0] == 3);
    CHECK(grid.mode(4)[0] == -4);
    CHECK(grid.mode(7)[0] == -1);
    CHECK(grid.frequency(4)[0] == doctest::Approx(-4.0));
    CHECK(grid.odd_frequency(4)[0] == 0.0);
    CHECK_FALSE(grid.mode_flat({4, 0, 0}).has_value());
    CHECK(*grid.mode_flat({-4, 0, 0}) == 4u);
}

TEST_CASE("spectral derivative of a trigonometric polynomial is exact")
{
    const double L = 3.0;
    const Grid grid(spatial(1, 32, L));
    const Spectral sp(grid);
    const double k = 2 * pi * 3 / L;
    RealField f(32);
    for (std::size_t j = 0; j < 32; ++j) f[j] = std::sin(k * grid.position(j)[0]) + 0.5;
    ComplexField symbol(32);
    for (std::size_t i = 0; i < 32; ++i) symbol[i] = Complex(0.0, sp.odd_frequencies()[i][0]);
    const auto df = apply_multiplier(sp, to_complex(f), std::span<const Complex>(symbol));
    double err = 0.0;
    for (std::size_t j = 0; j < 32; ++j) err = std::max(err, std::abs(df[j] - k * std::cos(k * grid.position(j)[0])));
    CHECK(err < 1e-12);
}

TEST_CASE("real fields stay real under odd symbols")
{
    const Grid grid(spatial(1, 16));
    const Spectral sp(grid);
    const auto f = oracle::random_field(16, 4, true);
    ComplexField symbol(16);
    for (std::size_t i = 0; i < 16; ++i) symbol[i] = Complex(0.0, sp.odd_frequencies()[i][0]);
    const auto df = apply_multiplier(sp, as_field(f), std::span<const Complex>(symbol));
    for (const auto& z : df) CHECK(std::abs(z.imag()) < 1e-13);
}

TEST_CASE("propagator exp(-itH) is unitary and matches the symbol")
{
    const Grid grid(spatial(2, 8));
    const Spectral sp(grid);
    const SymbolTable sym(sp);
    const auto prop = sym.h_propagator(0.37);
    for (std::size_t i = 0; i < prop.size(); ++i) {
        CHECK(std::abs(prop[i]) == doctest::Approx(1.0).epsilon(1e-15));
        const double a2 = sp.frequency_abs2()[i];
        CHECK(std::arg(prop[i] * std::polar(1.0, 0.37 * h_symbol(a2))) == doctest::Approx(0.0).scale(1.0));
    }
    CHECK(u_symbol(0.0) == 0.0);
    CHECK(h_symbol(4.0) == doctest::Approx(2.0 * std::sqrt(6.0)));
    CHECK(bracket_symbol(2.0) == doctest::Approx(2.0));
}

TEST_CASE("kernel symbols match numerical Fourier transforms")
{
    // 1-D exponential: int e^{-|r|} cos(z r) dr / 2 by trapezoid on [0, 60].
    for (double z : {0.0, 0.5, 1.3, 3.0}) {
        const int n = 200000;
        const double h = 60.0 / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r = i * h;
            s += (i == 0 || i == n ? 0.5 : 1.0) * std::exp(-r) * std::cos(z * r);
        }
        s *= h; // half-line integral; mass on the half line is 1
        CHECK(kernel_symbol(KernelKind::exponential, 1, z * z) == doctest::Approx(s).epsilon(1e-6));
    }
    // 3-D exponential via the radial transform 4 pi int e^{-r} r sin(z r) / z dr / (8 pi).
    for (double z : {0.4, 1.0, 2.5}) {
        const int n = 200000;
        const double h = 60.0 / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r = i * h;
            s += (i == 0 || i == n ? 0.5 : 1.0) * std::exp(-r) * r * std::sin(z * r) / z;
        }
        s *= h * 4 * pi / (8 * pi);
        CHECK(kernel_symbol(KernelKind::exponential, 3, z * z) == doctest::Approx(s).epsilon(1e-6));
    }
    CHECK(kernel_mass(KernelKind::exponential, 1) == doctest::Approx(2.0));
    CHECK(kernel_mass(KernelKind::exponential, 3) == doctest::Approx(8 * pi));
    CHECK(kernel_mass(KernelKind::gaussian, 2) == doctest::Approx(pi));
    CHECK(kernel_symbol(KernelKind::gaussian, 2, 4.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(kernel_tail_mass(KernelKind::exponential, 1, 3.0) == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("Littlewood-Paley cutoff and partition of unity")
{
    CHECK(lp_cutoff(0.5) == 1.0);
    CHECK(lp_cutoff(1.0) == 1.0);
    CHECK(lp_cutoff(2.0) == 0.0);
    CHECK(lp_cutoff(3.0) == 0.0);
    double prev = 1.0;
    for (double s = 1.0; s <= 2.0; s += 0.01) {
        const double c = lp_cutoff(s);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
    // Dyadic annuli telescope to 1 at every nonzero frequency.
    for (double z : {0.3, 1.0, 2.7, 11.0}) {
        double total = 0.0;
        for (int j = -10; j <= 10; ++j) total += lp_annulus(z, std::ldexp(1.0, j));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }

    const Grid grid(spatial(1, 32));
    const Spectral sp(grid);
    const auto f = as_field(oracle::random_field(32, 5));
    const auto [klo, khi] = lp_resolvable_range(sp);
    ComplexField sum(32, Complex{});
    for (double k = klo; k <= khi * 1.0000001; k *= 2.0) {
        const auto part = lp_project(sp, f, k);
        for (std::size_t i = 0; i < 32; ++i) sum[i] += part[i];
    }
    const Complex mean = sp.mean(f);
    double err = 0.0;
    for (std::size_t i = 0; i < 32; ++i) err = std::max(err, std::abs(sum[i] + mean - f[i]));
    CHECK(err < 1e-12);

    const auto [lo, hi] = lp_split(sp, f, 4.0);
    err = 0.0;
    for (std::size_t i = 0; i < 32; ++i) err = std::max(err, std::abs(lo[i] + hi[i] + mean - f[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("lattice mismatches raise DimensionError")
{
    const Grid grid(spatial(1, 16));
    const Spectral sp(grid);
    CHECK_THROWS_AS(sp.forward(ComplexField(8)), DimensionError);
    std::vector<double> sym(8, 1.0);
    CHECK_THROWS_AS(apply_multiplier(sp, ComplexField(16), std::span<const double>(sym)), DimensionError);
}

}
