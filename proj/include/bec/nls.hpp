#pragma once

#include <utility>
#include <vector>

#include "bec/common.hpp"
#include "bec/grid.hpp"
#include "bec/multilinear.hpp"
#include "bec/spectral.hpp"

namespace bec {

/// Condensate wave function on the spatial torus; Psi == 1 is the background.
struct WaveField {
    ComplexField psi;
    double time = 0.0;
};

/// u = Psi - 1 = u1 - i u2, v = u1 + i U u2.
struct PerturbationViews {
    RealField u1;
    RealField u2;
    ComplexField v;
};

/// Which table to use for the quadratic normal-form symbol B1.
///  rederived: 2 U(z1+z2) (4 + 2|z1|^2 + 2|z2|^2 + z1.z2) / <(z1,z2)>^2, obtained by
///             collecting the quadratic terms of the perturbation system under Z = v + b(u);
///  printed:   -2 U(z1+z2) (4 + 4|z1|^2 + 4|z2|^2 - z1.z2) / <(z1,z2)>^2.
enum class QuadraticTable { rederived, printed };

/// Q1 as printed carries -2 B0[u2, |u|^2 (u1 + 1)], whose "+1" part is cubic and
/// duplicates a term already inside C3/C4; `quartic` drops it.
enum class QuarticTerm { printed, quartic };

/// C4 as printed weights only the third slot with U^{-1}; `all_slots` applies
/// U^{-1} to every v2 factor (u2 = U^{-1} v2 in each slot).
enum class CubicTable { printed, all_slots };

struct NormalFormOptions {
    QuadraticTable b1 = QuadraticTable::rederived;
    QuarticTerm q1 = QuarticTerm::printed;
    CubicTable c4 = CubicTable::printed;
};

/// Scalar normal-form symbols; frequencies carry unused trailing zeros.
namespace symbols {
double bracket_pair2(const Vec3& z1, const Vec3& z2); ///< 2 + |z1|^2 + |z2|^2
double b0(const Vec3& z1, const Vec3& z2);            ///< <(z1,z2)>^{-2}
double u_inverse(const Vec3& z);                      ///< U(z)^{-1}, 0 at z = 0
double b1(const Vec3& z1, const Vec3& z2, QuadraticTable table);
double b2(const Vec3& z1, const Vec3& z2);
double c1(const Vec3& z1, const Vec3& z2, const Vec3& z3);
double c2(const Vec3& z1, const Vec3& z2, const Vec3& z3);
double c3(const Vec3& z1, const Vec3& z2, const Vec3& z3);
double c4(const Vec3& z1, const Vec3& z2, const Vec3& z3, CubicTable table);
} // namespace symbols

class NlsModel {
public:
    explicit NlsModel(const Grid& grid);
    NlsModel(const NlsModel&) = delete;
    NlsModel& operator=(const NlsModel&) = delete;

    const Grid& grid() const { return spectral_.grid(); }
    const Spectral& spectral() const { return spectral_; }
    const SymbolTable& symbols() const { return symbols_; }
    const MultilinearEngine& engine() const { return engine_; }

    WaveField background() const;
    double mass(const WaveField& w) const; ///< sum |Psi|^2 dr

    /// Strang step for i Psi_t = (-Delta + |Psi|^2 + W) Psi with W frozen over the step.
    void step(WaveField& w, const RealField& W, double dt) const;

    PerturbationViews to_views(const WaveField& w) const;
    PerturbationViews views_from(const RealField& u1, const RealField& u2) const;
    /// Inverse of to_views given u1, u2.
    WaveField from_perturbation(const RealField& u1, const RealField& u2, double time = 0.0) const;

    /// B0[f, g] with symbol <(z1,z2)>^{-2}
    ComplexField b0(const ComplexField& f, const ComplexField& g) const;
    ComplexField normal_form_Z(const PerturbationViews& views) const;
    ComplexField nonlinearity_NZ(const PerturbationViews& views, const NormalFormOptions& opt = {}) const;
    ComplexField forcing_M(const PerturbationViews& views, const RealField& V) const;
    ComplexField q1_term(const PerturbationViews& views, QuarticTerm form = QuarticTerm::printed) const;

    /// U^{-1} applied to a field; the zero mode is dropped with a warning if it is
    /// larger than 1e-12.
    ComplexField apply_u_inverse(const ComplexField& f, const char* context) const;

    /// J f = e^{-itH} (r . e^{itH} f), one component per spatial axis; r is the
    /// signed torus coordinate in [-L/2, L/2).
    std::vector<ComplexField> j_weight(const ComplexField& f, double t) const;
    /// ||Z||_{H^1} + ||J Z||_{H^1}
    double x_norm(const ComplexField& z, double t) const;
    /// ||(1 - Delta)^{1/2} U^{-1/6} Z||_{L^6}, the instantaneous integrand of the S norm.
    double s_seminorm(const ComplexField& z) const;

    double sup_norm(const RealField& f) const;

private:
    Spectral spectral_;
    SymbolTable symbols_;
    MultilinearEngine engine_;
    RealField u_inverse_;
};

/// Time derivatives of (u1, u2) from the perturbation system
///   u1' = -Delta u2 + 2 u1 u2 + |u|^2 u2 + V u2
///   u2' = -(2 - Delta) u1 - 3 u1^2 - u2^2 - |u|^2 u1 - V (u1 + 1)
/// with products formed alias-free. V may be null (V = 0).
std::pair<RealField, RealField> perturbation_rates(const NlsModel& model, const RealField& u1, const RealField& u2,
                                                   const RealField* V);

/// i Z' - H Z - N_Z(v) - F, with Z' from the chain rule applied to Z = v + b(u)
/// along perturbation_rates. For V != 0, F = i M(v) + U[V (1 + u1)] + i V u2: the
/// forcing term together with the potential terms that enter v' directly.
ComplexField normal_form_residual(const NlsModel& model, const RealField& u1, const RealField& u2,
                                  const RealField* V, const NormalFormOptions& opt = {});

} // namespace bec
