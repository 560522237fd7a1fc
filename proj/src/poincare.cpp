#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>
#include <string>

#include "bec/diagnostics.hpp"
#include "l2_operator.hpp"

namespace bec {

namespace {

class QuotientEvaluator {
public:
    QuotientEvaluator(const Grid& grid, const BoseEinsteinWeight& weight, GradientKind gradient)
        : grid_(grid), weight_(weight), gradient_(gradient) {
        if (gradient == GradientKind::face) faces_ = detail::build_faces(grid, weight);
    }

    double operator()(const RealField& phi, double boundary_tol) const {
        const std::size_t np = grid_.momentum_size();
        if (phi.size() != np) throw DimensionError("poincare quotient: phi must live on the momentum grid");
        double peak = 0.0, face = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double a = std::abs(phi[j]);
            peak = std::max(peak, a);
            const Index3 idx = grid_.momentum_index(j);
            for (int d = 0; d < grid_.dim_p(); ++d)
                if (idx[d] == 0 || idx[d] == grid_.n_p() - 1) face = std::max(face, a);
        }
        const RealField& inv = weight_.inverse();
        double den = 0.0;
        for (std::size_t j = 0; j < np; ++j) den += inv[j] * phi[j] * phi[j];
        if (!(den > 0.0) || peak == 0.0) throw DegenerateInputError("poincare quotient: phi has zero weighted norm");
        if (face > boundary_tol * peak)
            throw std::invalid_argument("poincare quotient: phi does not decay at the momentum box faces (face/peak = " +
                                        std::to_string(face / peak) + ")");
        double num = 0.0;
        if (gradient_ == GradientKind::face) {
            num = detail::stiffness_energy(faces_, phi.data());
        } else {
            const double h = grid_.dp();
            const int n = grid_.n_p();
            for (std::size_t j = 0; j < np; ++j) {
                const Index3 idx = grid_.momentum_index(j);
                double g2 = 0.0;
                for (int d = 0; d < grid_.dim_p(); ++d) {
                    Index3 lo = idx, hi = idx;
                    // Centered inside, one-sided on the box faces.
                    if (idx[d] > 0) lo[d] -= 1;
                    if (idx[d] < n - 1) hi[d] += 1;
                    const double span = (hi[d] - lo[d]) * h;
                    const double gd = (phi[grid_.momentum_flat(hi)] - phi[grid_.momentum_flat(lo)]) / span;
                    g2 += gd * gd;
                }
                num += inv[j] * g2;
            }
        }
        return num / den;
    }

private:
    const Grid& grid_;
    const BoseEinsteinWeight& weight_;
    GradientKind gradient_;
    detail::MomentumFaces faces_;
};

double bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

} // namespace

double poincare_quotient(const Grid& grid, const BoseEinsteinWeight& weight, const RealField& phi,
                         GradientKind gradient, double boundary_tol) {
    return QuotientEvaluator(grid, weight, gradient)(phi, boundary_tol);
}

PoincareSearch poincare_search(const Grid& grid, const BoseEinsteinWeight& weight, std::size_t trials,
                               std::uint64_t seed, GradientKind gradient) {
    const QuotientEvaluator quotient(grid, weight, gradient);
    const std::size_t np = grid.momentum_size();
    const int dim = grid.dim_p();
    const double pmax = grid.p_max();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };

    PoincareSearch out;
    out.weight_quotient = quotient(weight.values(), 1e-8);
    out.min_quotient = std::numeric_limits<double>::infinity();
    out.max_quotient = 0.0;

    RealField phi(np);
    const std::size_t max_attempts = 10 * trials + 10;
    for (std::size_t trial = 0; out.trials < trials && trial < max_attempts; ++trial) {
        std::string family;
        if (trial % 2 == 0) {
            // exp(-a|p|) times a smooth modulation; a >= 0.75 keeps the face values tiny.
            family = "modulated-exponential";
            const double alpha = uniform(0.75, 2.0);
            double c0 = uniform(-1.0, 1.0);
            std::array<Vec3, 3> omega{};
            std::array<double, 3> amp{}, phase{};
            for (int k = 0; k < 3; ++k) {
                for (int d = 0; d < dim; ++d) omega[k][d] = uniform(-0.6, 0.6);
                amp[k] = uniform(-1.0, 1.0);
                phase[k] = uniform(0.0, 6.283185307179586);
            }
            if (std::abs(c0) < 0.05) c0 = 0.05;
            for (std::size_t j = 0; j < np; ++j) {
                const Vec3 p = grid.momentum(j);
                double m = c0;
                for (int k = 0; k < 3; ++k) m += amp[k] * std::cos(dot(omega[k], p) + phase[k]);
                phi[j] = std::exp(-alpha * std::sqrt(norm2(p))) * m;
            }
        } else {
            // exp(-b|p - c|) times a compact bump of radius R inside the box.
            family = "compact-bump";
            const double beta = uniform(0.5, 1.0);
            Vec3 c{0, 0, 0};
            for (int d = 0; d < dim; ++d) c[d] = uniform(-0.15, 0.15) * pmax;
            double cmax = 0.0;
            for (int d = 0; d < dim; ++d) cmax = std::max(cmax, std::abs(c[d]));
            const double radius = uniform(0.3, 0.97) * (pmax - cmax);
            for (std::size_t j = 0; j < np; ++j) {
                Vec3 p = grid.momentum(j);
                for (int d = 0; d < dim; ++d) p[d] -= c[d];
                const double s = std::sqrt(norm2(p));
                phi[j] = std::exp(-beta * s) * bump(s / radius);
            }
        }
        double q;
        try {
            q = quotient(phi, 1e-8);
        } catch (const std::invalid_argument&) {
            continue; // degenerate or not decaying at the faces: not an admissible test function
        }
        ++out.trials;
        if (q < out.min_quotient) {
            out.min_quotient = q;
            out.argmin = trial;
            out.argmin_family = family;
        }
        out.max_quotient = std::max(out.max_quotient, q);
    }
    return out;
}

} // namespace bec
