#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bec/weight.hpp"
#include "oracles.hpp"

using namespace bec;
using std::numbers::pi;

namespace {

GridSpec momentum(int dim_p, int n_p, double p_max)
{
    GridSpec g;
    g.dim_r = 1;
    g.dim_p = dim_p;
    g.n_r = 4;
    g.n_p = n_p;
    g.p_max = p_max;
    return g;
}

constexpr double kZeta3 = 1.2020569031595942;

} // namespace

TEST_SUITE("weight") {

TEST_CASE("discrete weight has unit momentum mass")
{
    for (auto [dim, eps] : {std::pair{1, 0.5}, std::pair{2, 0.3}, std::pair{3, 0.0}}) {
        const Grid grid(momentum(dim, dim == 3 ? 16 : 32, 12.0));
        const auto w = make_weight(grid, eps);
        double s = 0.0;
        for (double e : w.values()) s += e * grid.cell_volume_p();
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(w.mass() == doctest::Approx(1.0).epsilon(1e-13));
        for (std::size_t j = 0; j < w.values().size(); ++j) {
            CHECK(w.values()[j] > 0.0);
            CHECK(w.values()[j] * w.inverse()[j] == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("continuum constant in 3-D with eps = 0 is 1 / (8 pi zeta(3))")
{
    CHECK(continuum_weight_constant(3, 0.0) == doctest::Approx(1.0 / (8 * pi * kZeta3)).epsilon(1e-10));
}

TEST_CASE("continuum constant in 1-D matches a trapezoid integral")
{
    const double eps = 0.5;
    const int n = 400000;
    const double h = 80.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * oracle::bose_einstein(i * h, eps);
    s *= 2.0 * h;
    CHECK(continuum_weight_constant(1, eps) == doctest::Approx(1.0 / s).epsilon(1e-8));
}

TEST_CASE("discrete constant converges to the continuum constant under refinement")
{
    double prev = 1.0;
    for (int n : {32, 128, 512}) {
        const Grid grid(momentum(1, n, 40.0));
        const auto w = make_weight(grid, 0.5);
        CHECK(w.normalization_defect() <= prev + 1e-12);
        prev = w.normalization_defect();
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("weight profile matches the Bose-Einstein law")
{
    const Grid grid(momentum(3, 8, 6.0));
    const auto w = make_weight(grid, 0.0);
    for (std::size_t j = 0; j < grid.momentum_size(); ++j) {
        const Vec3 p = grid.momentum(j);
        const double expected = w.c_e() * oracle::bose_einstein(std::sqrt(norm2(p)), 0.0);
        CHECK(w[j] == doctest::Approx(expected).epsilon(1e-13));
        CHECK(w.evaluate(p) == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK(w.boundary_ratio() > 0.0);
    CHECK(w.boundary_ratio() < 0.05);
}

TEST_CASE("non-integrable and invalid configurations are rejected")
{
    CHECK_THROWS_AS(make_weight(Grid(momentum(1, 32, 8.0)), 0.0), IntegrabilityError);
    CHECK_THROWS_AS(make_weight(Grid(momentum(2, 16, 8.0)), 0.0), IntegrabilityError);
    CHECK_THROWS_AS(make_weight(Grid(momentum(1, 32, 8.0)), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_weight(Grid(momentum(1, 32, 8.0)), std::nan("")), std::invalid_argument);
}

}
