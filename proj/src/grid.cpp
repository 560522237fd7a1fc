#include "bec/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bec {

namespace {

std::size_t ipow(int n, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(n);
    return r;
}

} // namespace

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    if (spec.dim_r < 1 || spec.dim_r > 3) throw std::invalid_argument("grid: dim_r must be 1, 2 or 3");
    if (spec.dim_p < 1 || spec.dim_p > 3) throw std::invalid_argument("grid: dim_p must be 1, 2 or 3");
    if (spec.dim_p < spec.dim_r)
        throw std::invalid_argument("grid: dim_p must be at least dim_r (transport uses p_1..p_dim_r)");
    if (spec.n_r <= 0 || spec.n_r % 2 != 0) throw std::invalid_argument("grid: n_r must be a positive even integer");
    if (spec.n_p <= 0 || spec.n_p % 2 != 0) throw std::invalid_argument("grid: n_p must be a positive even integer");
    if (!(spec.length_r > 0.0)) throw std::invalid_argument("grid: length_r must be positive");
    if (!(spec.p_max > 0.0)) throw std::invalid_argument("grid: p_max must be positive");

    p_shift_ = spec.p_shift.value_or(0.5 * dp());
    if (!(p_shift_ >= 0.0 && p_shift_ < dp()))
        throw std::invalid_argument("grid: p_shift must lie in [0, dp)");

    spatial_size_ = ipow(spec.n_r, spec.dim_r);
    momentum_size_ = ipow(spec.n_p, spec.dim_p);
    cell_r_ = std::pow(dr(), spec.dim_r);
    cell_p_ = std::pow(dp(), spec.dim_p);

    if (!(min_abs_momentum() > 1e-12 * spec.p_max))
        throw std::invalid_argument("grid: a momentum node falls on p = 0; choose a nonzero p_shift");
}

Index3 Grid::unflatten(std::size_t flat, int dim, int n) {
    Index3 idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
    return idx;
}

std::size_t Grid::flatten(const Index3& idx, int dim, int n) {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[a]);
    return flat;
}

Vec3 Grid::position(std::size_t flat) const {
    const Index3 idx = spatial_index(flat);
    Vec3 x{0, 0, 0};
    for (int a = 0; a < spec_.dim_r; ++a) x[a] = idx[a] * dr();
    return x;
}

Vec3 Grid::signed_position(std::size_t flat) const {
    Vec3 x = position(flat);
    for (int a = 0; a < spec_.dim_r; ++a)
        if (x[a] >= 0.5 * spec_.length_r) x[a] -= spec_.length_r;
    return x;
}

Vec3 Grid::momentum(std::size_t flat) const {
    const Index3 idx = momentum_index(flat);
    Vec3 p{0, 0, 0};
    for (int a = 0; a < spec_.dim_p; ++a) p[a] = momentum_coordinate(idx[a]);
    return p;
}

double Grid::min_abs_momentum() const {
    // The box is a tensor product, so the closest node to the origin uses the
    // closest 1-D coordinate on every axis.
    double best = std::abs(momentum_coordinate(0));
    for (int i = 1; i < spec_.n_p; ++i) best = std::min(best, std::abs(momentum_coordinate(i)));
    return best * std::sqrt(static_cast<double>(spec_.dim_p));
}

Index3 Grid::mode(std::size_t flat) const {
    Index3 k = spatial_index(flat);
    for (int a = 0; a < spec_.dim_r; ++a)
        if (k[a] >= spec_.n_r / 2) k[a] -= spec_.n_r;
    return k;
}

Vec3 Grid::frequency(std::size_t flat) const {
    const Index3 k = mode(flat);
    const double unit = 2.0 * std::numbers::pi / spec_.length_r;
    Vec3 z{0, 0, 0};
    for (int a = 0; a < spec_.dim_r; ++a) z[a] = unit * k[a];
    return z;
}

Vec3 Grid::odd_frequency(std::size_t flat) const {
    const Index3 k = mode(flat);
    Vec3 z = frequency(flat);
    for (int a = 0; a < spec_.dim_r; ++a)
        if (k[a] == -spec_.n_r / 2) z[a] = 0.0;
    return z;
}

std::optional<std::size_t> Grid::mode_flat(const Index3& k) const {
    Index3 idx{0, 0, 0};
    for (int a = 0; a < spec_.dim_r; ++a) {
        if (k[a] < -spec_.n_r / 2 || k[a] >= spec_.n_r / 2) return std::nullopt;
        idx[a] = k[a] < 0 ? k[a] + spec_.n_r : k[a];
    }
    for (int a = spec_.dim_r; a < 3; ++a)
        if (k[a] != 0) return std::nullopt;
    return spatial_flat(idx);
}

bool Grid::same_spatial_lattice(const Grid& other) const {
    return spec_.dim_r == other.spec_.dim_r && spec_.n_r == other.spec_.n_r &&
           spec_.length_r == other.spec_.length_r;
}

} // namespace bec
