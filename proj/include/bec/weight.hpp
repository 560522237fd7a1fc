#pragma once

#include "bec/common.hpp"
#include "bec/grid.hpp"

namespace bec {

/// Bose-Einstein weight E(p) = c_e / (exp(sqrt(|p|^2 + eps^2)) - 1) sampled on the
/// momentum nodes, normalized so that the discrete momentum integral is 1.
class BoseEinsteinWeight {
public:
    BoseEinsteinWeight(const Grid& grid, double epsilon);

    const RealField& values() const { return e_; }
    const RealField& inverse() const { return inv_; }
    double operator[](std::size_t j) const { return e_[j]; }

    double epsilon() const { return epsilon_; }
    double c_e() const { return c_e_; }
    /// Normalization constant of the continuum weight on R^dim_p (1/(8 pi zeta(3)) for
    /// dim_p = 3, eps = 0).
    double continuum_c_e() const { return c_cont_; }
    /// |c_e / continuum_c_e - 1|: truncation plus quadrature error of the box.
    double normalization_defect() const { return std::abs(c_e_ / c_cont_ - 1.0); }
    /// Largest weight value on the box faces relative to the peak value.
    double boundary_ratio() const { return boundary_ratio_; }
    /// Discrete sum_p E dp (1 up to rounding).
    double mass() const { return mass_; }

    /// Analytic weight (with the discrete constant) at an arbitrary momentum.
    double evaluate(const Vec3& p) const;
    double evaluate_inverse(const Vec3& p) const;

private:
    double raw(double abs_p) const;

    int dim_p_;
    double epsilon_;
    double c_e_ = 1.0;
    double c_cont_ = 1.0;
    double boundary_ratio_ = 0.0;
    double mass_ = 0.0;
    RealField e_, inv_;
};

/// eps >= 0; eps = 0 is accepted only for dim_p = 3.
BoseEinsteinWeight make_weight(const Grid& grid, double epsilon);

/// Continuum normalization 1 / int_{R^dim} (exp(sqrt(|p|^2+eps^2)) - 1)^{-1} dp by
/// radial quadrature.
double continuum_weight_constant(int dim, double epsilon);

} // namespace bec
