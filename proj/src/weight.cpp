#include "bec/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace bec {

namespace {

double sphere_area(int dim) {
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 4.0 * std::numbers::pi;
    }
}

void validate(int dim, double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("weight: regularization must be finite and >= 0, got " + std::to_string(epsilon));
    if (epsilon == 0.0 && dim < 3)
        throw IntegrabilityError("weight: 1/(e^|p|-1) is not integrable enough for dim_p = " + std::to_string(dim) +
                                 "; use a positive regularization");
}

} // namespace

double continuum_weight_constant(int dim, double epsilon) {
    validate(dim, epsilon);
    const auto radial = [dim, epsilon](double s) {
        const double e = std::sqrt(s * s + epsilon * epsilon);
        if (e == 0.0) return dim == 1 ? std::numeric_limits<double>::infinity() : 0.0;
        return std::pow(s, dim - 1) / std::expm1(e);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    const double mass = sphere_area(dim) * integrator.integrate(radial);
    return 1.0 / mass;
}

BoseEinsteinWeight::BoseEinsteinWeight(const Grid& grid, double epsilon) : dim_p_(grid.dim_p()), epsilon_(epsilon) {
    validate(dim_p_, epsilon);
    if (epsilon == 0.0 && grid.min_abs_momentum() <= 0.0)
        throw IntegrabilityError("weight: a momentum node sits on p = 0; shift the momentum grid");

    const std::size_t n = grid.momentum_size();
    e_.resize(n);
    inv_.resize(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        e_[j] = raw(std::sqrt(norm2(grid.momentum(j))));
        sum += e_[j];
    }
    c_e_ = 1.0 / (sum * grid.cell_volume_p());
    c_cont_ = continuum_weight_constant(dim_p_, epsilon);

    double peak = 0.0, face = 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        e_[j] *= c_e_;
        inv_[j] = 1.0 / e_[j];
        s += e_[j];
        peak = std::max(peak, e_[j]);
        const Index3 idx = grid.momentum_index(j);
        for (int a = 0; a < dim_p_; ++a)
            if (idx[a] == 0 || idx[a] == grid.n_p() - 1) face = std::max(face, e_[j]);
    }
    mass_ = s * grid.cell_volume_p();
    boundary_ratio_ = face / peak;
}

double BoseEinsteinWeight::raw(double abs_p) const {
    return 1.0 / std::expm1(std::sqrt(abs_p * abs_p + epsilon_ * epsilon_));
}

double BoseEinsteinWeight::evaluate(const Vec3& p) const { return c_e_ * raw(std::sqrt(norm2(p))); }

double BoseEinsteinWeight::evaluate_inverse(const Vec3& p) const {
    return std::expm1(std::sqrt(norm2(p) + epsilon_ * epsilon_)) / c_e_;
}

BoseEinsteinWeight make_weight(const Grid& grid, double epsilon) { return BoseEinsteinWeight(grid, epsilon); }

} // namespace bec
