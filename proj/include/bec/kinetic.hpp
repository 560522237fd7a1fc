#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "bec/common.hpp"
#include "bec/grid.hpp"
#include "bec/spectral.hpp"
#include "bec/weight.hpp"

namespace bec {

/// f(r, p) on the phase-space grid, r outer and p inner.
struct PhaseSpaceField {
    RealField values;
    double time = 0.0;
};

/// f_inf(p) = (M / Vol) E(p): the torus analogue of M E(p), chosen so that the
/// total mass of f_inf equals M.
struct Equilibrium {
    double mass = 0.0;
    double density = 0.0; ///< M / Vol
    RealField f_inf;      ///< per momentum node
};

enum class OperatorKind { L1, L2 };

/// Divergence form E div_p(E^{-1} grad_p g) (self-adjoint in the L-inner product)
/// or the literal form E^{-1} div_p(E^{-1} grad_p g).
enum class L2Form { divergence, literal };

/// Time integrator for the L2 collision substep. TR-BDF2 is second order and
/// L-stable; backward Euler is first order but preserves positivity.
enum class L2Scheme { tr_bdf2, backward_euler };

/// Options for the implicit momentum solve used by the L2 collision substep.
struct L2SolverOptions {
    double rel_tol = 1e-13;
    int max_iterations = 5000;
    L2Scheme scheme = L2Scheme::tr_bdf2;
};

class KineticModel {
public:
    KineticModel(const Grid& grid, double epsilon, L2Form form = L2Form::divergence, L2SolverOptions solver = {});

    const Grid& grid() const { return spectral_.grid(); }
    const Spectral& spectral() const { return spectral_; }
    const BoseEinsteinWeight& weight() const { return weight_; }
    L2Form l2_form() const { return form_; }

    Equilibrium equilibrium(double mass) const;
    PhaseSpaceField equilibrium_field(const Equilibrium& eq) const;

    // Moments and norms.
    RealField rho_moment(const PhaseSpaceField& f) const;
    double mass(const PhaseSpaceField& f) const;
    double l_norm(const PhaseSpaceField& f) const;
    double l_inner(const PhaseSpaceField& f, const PhaseSpaceField& g) const;
    /// ||f - f_inf||_L
    double l_norm_deviation(const PhaseSpaceField& f, const Equilibrium& eq) const;
    /// L-norm of the spectral spatial gradient.
    double grad_l_norm(const PhaseSpaceField& f) const;
    /// sum_r N_c sum_faces E^{-1}_face |D_p (f - f_inf)|^2 dr dp; with N_c == nullptr uses N_c = 1.
    double l2_dissipation(const PhaseSpaceField& f, const Equilibrium& eq, const RealField* nc = nullptr) const;
    double min_value(const PhaseSpaceField& f) const;
    double max_value(const PhaseSpaceField& f) const;

    // Operators.
    PhaseSpaceField apply_L1(const PhaseSpaceField& f) const;
    PhaseSpaceField apply_L2(const PhaseSpaceField& f, const Equilibrium& eq) const;

    // Substeps.
    void transport_step(PhaseSpaceField& f, double dt) const;
    void collision_step(PhaseSpaceField& f, const RealField& nc, double dt, OperatorKind kind,
                        const Equilibrium& eq) const;
    /// Strang splitting transport(dt/2) collision(dt) transport(dt/2).
    void kinetic_step(PhaseSpaceField& f, const RealField& nc, double dt, OperatorKind kind,
                      const Equilibrium& eq) const;

    /// Throws PositivityError if min f < -threshold * max f.
    void check_positivity(const PhaseSpaceField& f, double threshold = 1e-8) const;

    /// Total CG iterations spent in L2 solves so far (diagnostic).
    long l2_iterations() const;

private:
    struct Faces;
    void collide_l1(double* f, double n_c, double dt) const;
    void collide_l2(double* f, double n_c, double dt, const Equilibrium& eq) const;
    const ComplexField& phases(double dt) const;

    Spectral spectral_;
    SymbolTable symbols_;
    BoseEinsteinWeight weight_;
    L2Form form_;
    L2SolverOptions solver_;
    std::shared_ptr<const Faces> faces_;

    mutable std::mutex cache_mutex_;
    mutable std::map<double, ComplexField> phase_cache_;
    mutable long l2_iterations_ = 0;
};

/// Throws CouplingPositivityError if N_c <= 0 anywhere.
void check_coupling_positive(const RealField& nc);

} // namespace bec
