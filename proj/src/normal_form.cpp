#include <cmath>
#include <utility>

#include "bec/nls.hpp"

namespace bec {

namespace symbols {

namespace {
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
double u_of(const Vec3& z) { return u_symbol(norm2(z)); }
} // namespace

double bracket_pair2(const Vec3& z1, const Vec3& z2) { return 2.0 + norm2(z1) + norm2(z2); }

double b0(const Vec3& z1, const Vec3& z2) { return 1.0 / bracket_pair2(z1, z2); }

double u_inverse(const Vec3& z) {
    const double a = norm2(z);
    return a > 0.0 ? 1.0 / u_symbol(a) : 0.0;
}

double b1(const Vec3& z1, const Vec3& z2, QuadraticTable table) {
    const double u = u_of(add(z1, z2));
    const double a1 = norm2(z1), a2 = norm2(z2), d = dot(z1, z2);
    if (table == QuadraticTable::printed) return -2.0 * u * (4.0 + 4.0 * a1 + 4.0 * a2 - d) / (2.0 + a1 + a2);
    return 2.0 * u * (4.0 + 2.0 * a1 + 2.0 * a2 + d) / (2.0 + a1 + a2);
}

double b2(const Vec3& z1, const Vec3& z2) {
    const double a1 = norm2(z1), a2 = norm2(z2);
    if (a1 == 0.0 || a2 == 0.0) return 0.0;
    const double cosine = dot(z1, z2) / std::sqrt(a1 * a2);
    return -2.0 * u_of(add(z1, z2)) * bracket_symbol(a1) * bracket_symbol(a2) * cosine / (2.0 + a1 + a2);
}

double c1(const Vec3& z1, const Vec3& z2, const Vec3& z3) { return u_of(add(add(z1, z2), z3)); }

double c2(const Vec3& z1, const Vec3& z2, const Vec3& z3) {
    return u_of(add(add(z1, z2), z3)) * u_inverse(z1) * u_inverse(z2);
}

double c3(const Vec3& z1, const Vec3& z2, const Vec3& z3) {
    return u_inverse(z3) * (1.0 - 4.0 / bracket_pair2(z1, add(z2, z3)) - 6.0 / bracket_pair2(add(z1, z2), z3));
}

double c4(const Vec3& z1, const Vec3& z2, const Vec3& z3, CubicTable table) {
    double s = u_inverse(z3) * (1.0 - 2.0 / bracket_pair2(add(z1, z2), z3));
    if (table == CubicTable::all_slots) s *= u_inverse(z1) * u_inverse(z2);
    return s;
}

} // namespace symbols

namespace {

ComplexField real_of(const ComplexField& f) {
    ComplexField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

ComplexField imag_of(const ComplexField& f) {
    ComplexField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].imag();
    return out;
}

void axpy(ComplexField& y, Complex a, const ComplexField& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

} // namespace

PerturbationViews NlsModel::views_from(const RealField& u1, const RealField& u2) const {
    return to_views(from_perturbation(u1, u2));
}

ComplexField NlsModel::b0(const ComplexField& f, const ComplexField& g) const {
    return engine_.bilinear([](const Vec3& z1, const Vec3& z2) { return symbols::b0(z1, z2); }, f, g);
}

ComplexField NlsModel::normal_form_Z(const PerturbationViews& views) const {
    const ComplexField u1 = to_complex(views.u1);
    const ComplexField u2 = to_complex(views.u2);
    ComplexField z = views.v;
    axpy(z, -1.0, b0(u1, u1));
    axpy(z, 1.0, b0(u2, u2));
    return z;
}

ComplexField NlsModel::nonlinearity_NZ(const PerturbationViews& views, const NormalFormOptions& opt) const {
    const ComplexField v1 = real_of(views.v);
    const ComplexField v2 = imag_of(views.v);
    const auto table = opt.b1;
    ComplexField out =
        engine_.bilinear([table](const Vec3& a, const Vec3& b) { return symbols::b1(a, b, table); }, v1, v1);
    axpy(out, 1.0, engine_.bilinear([](const Vec3& a, const Vec3& b) { return symbols::b2(a, b); }, v2, v2));

    // Cubic symbols factor into pointwise products and B0, which keeps them O(n^2).
    const ComplexField w = apply_u_inverse(v2, "cubic normal-form terms");
    const ComplexField v1v1 = engine_.product(v1, v1);
    // C1[v1,v1,v1] = U(v1^3)
    axpy(out, 1.0, apply_multiplier(spectral_, engine_.product(v1v1, v1), symbols_.u()));
    // C2[v2,v2,v1] = U(w w v1)
    axpy(out, 1.0, apply_multiplier(spectral_, engine_.product(w, w, v1), symbols_.u()));
    // C3[v1,v1,v2] = v1 v1 w - 4 B0[v1, v1 w] - 6 B0[v1 v1, w]
    ComplexField c3 = engine_.product(v1v1, w);
    axpy(c3, -4.0, b0(v1, engine_.product(v1, w)));
    axpy(c3, -6.0, b0(v1v1, w));
    axpy(out, Complex(0.0, 1.0), c3);
    // C4[v2,v2,v2] = a a w - 2 B0[a a, w], a = v2 (printed) or w (all slots)
    const ComplexField& a = opt.c4 == CubicTable::printed ? v2 : w;
    const ComplexField aa = engine_.product(a, a);
    ComplexField c4 = engine_.product(aa, w);
    axpy(c4, -2.0, b0(aa, w));
    axpy(out, Complex(0.0, 1.0), c4);

    axpy(out, Complex(0.0, 1.0), q1_term(views, opt.q1));
    return out;
}

ComplexField NlsModel::forcing_M(const PerturbationViews& views, const RealField& V) const {
    spectral_.check_lattice(V.size(), "forcing");
    RealField one_plus_u1(views.u1.size());
    for (std::size_t i = 0; i < one_plus_u1.size(); ++i) one_plus_u1[i] = 1.0 + views.u1[i];
    const ComplexField u1 = to_complex(views.u1);
    const ComplexField u2 = to_complex(views.u2);
    const ComplexField vc = to_complex(V);
    ComplexField out = b0(u1, engine_.product(vc, u2));
    for (Complex& z : out) z *= -2.0;
    axpy(out, -2.0, b0(u2, engine_.product(vc, to_complex(one_plus_u1))));
    return out;
}

ComplexField NlsModel::q1_term(const PerturbationViews& views, QuarticTerm form) const {
    const ComplexField u1 = to_complex(views.u1);
    const ComplexField u2 = to_complex(views.u2);
    ComplexField abs_u2 = engine_.product(u1, u1);
    axpy(abs_u2, 1.0, engine_.product(u2, u2));
    ComplexField second = engine_.product(abs_u2, u1);
    if (form == QuarticTerm::printed) axpy(second, 1.0, abs_u2);
    ComplexField out = b0(u1, engine_.product(abs_u2, u2));
    for (Complex& z : out) z *= -2.0;
    axpy(out, -2.0, b0(u2, second));
    return out;
}

std::pair<RealField, RealField> perturbation_rates(const NlsModel& model, const RealField& u1, const RealField& u2,
                                                   const RealField* V) {
    const Spectral& sp = model.spectral();
    const MultilinearEngine& eng = model.engine();
    const ComplexField c1 = to_complex(u1);
    const ComplexField c2 = to_complex(u2);
    ComplexField abs_u2 = eng.product(c1, c1);
    axpy(abs_u2, 1.0, eng.product(c2, c2));

    const auto& abs2 = sp.frequency_abs2();
    RealField lap_neg(abs2.begin(), abs2.end());
    RealField shifted(abs2.size());
    for (std::size_t i = 0; i < abs2.size(); ++i) shifted[i] = 2.0 + abs2[i];

    ComplexField d1 = apply_multiplier(sp, c2, std::span<const double>(lap_neg));
    axpy(d1, 2.0, eng.product(c1, c2));
    axpy(d1, 1.0, eng.product(abs_u2, c2));
    ComplexField d2 = apply_multiplier(sp, c1, std::span<const double>(shifted));
    for (Complex& z : d2) z = -z;
    axpy(d2, -3.0, eng.product(c1, c1));
    axpy(d2, -1.0, eng.product(c2, c2));
    axpy(d2, -1.0, eng.product(abs_u2, c1));
    if (V) {
        const ComplexField vc = to_complex(*V);
        axpy(d1, 1.0, eng.product(vc, c2));
        axpy(d2, -1.0, vc);
        axpy(d2, -1.0, eng.product(vc, c1));
    }
    return {real_part(d1), real_part(d2)};
}

ComplexField normal_form_residual(const NlsModel& model, const RealField& u1, const RealField& u2,
                                  const RealField* V, const NormalFormOptions& opt) {
    const Spectral& sp = model.spectral();
    const auto [d1, d2] = perturbation_rates(model, u1, u2, V);
    const ComplexField c1 = to_complex(u1);
    const ComplexField c2 = to_complex(u2);
    const ComplexField dc1 = to_complex(d1);
    const ComplexField dc2 = to_complex(d2);

    // Z' = u1' + i U u2' - 2 B0[u1, u1'] + 2 B0[u2, u2']
    const ComplexField u_d2 = apply_multiplier(sp, dc2, model.symbols().u());
    ComplexField zdot(u1.size());
    for (std::size_t i = 0; i < zdot.size(); ++i) zdot[i] = dc1[i] + Complex(0.0, 1.0) * u_d2[i];
    axpy(zdot, -2.0, model.b0(c1, dc1));
    axpy(zdot, 2.0, model.b0(c2, dc2));

    const PerturbationViews views = model.views_from(u1, u2);
    const ComplexField z = model.normal_form_Z(views);
    const ComplexField hz = apply_multiplier(sp, z, model.symbols().h());
    const ComplexField nz = model.nonlinearity_NZ(views, opt);

    ComplexField r(zdot.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = Complex(0.0, 1.0) * zdot[i] - hz[i] - nz[i];
    if (V) {
        axpy(r, Complex(0.0, -1.0), model.forcing_M(views, *V));
        ComplexField vu = to_complex(*V);
        axpy(vu, 1.0, model.engine().product(to_complex(*V), c1));
        axpy(r, -1.0, apply_multiplier(sp, vu, model.symbols().u()));
        axpy(r, Complex(0.0, -1.0), model.engine().product(to_complex(*V), c2));
    }
    return r;
}

} // namespace bec
