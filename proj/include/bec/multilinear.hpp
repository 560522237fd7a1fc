#pragma once

// Multilinear Fourier multipliers on the torus.
//
//   B[f_1,...,f_N]^(zeta) = V^{1-N} sum_{zeta_1+...+zeta_N = zeta} B(zeta_1,...,zeta_N) f_1^(zeta_1)...f_N^(zeta_N)
//
// The V^{1-N} factor makes the constant symbol reproduce the pointwise
// product. Sums run over every pair (triple) of lattice modes and keep only
// outputs that land on the lattice, so results are alias-free. The padded
// product path computes the same thing for constant symbols with 2x
// zero-padded transforms.

#include <memory>
#include <vector>

#include "bec/common.hpp"
#include "bec/spectral.hpp"

namespace bec {

class MultilinearEngine {
public:
    explicit MultilinearEngine(const Spectral& spectral);

    const Spectral& spectral() const { return *spectral_; }

    /// Symbol: callable (const Vec3& z1, const Vec3& z2) -> Complex or double.
    template <class Symbol>
    ComplexField bilinear(const Symbol& symbol, const ComplexField& f, const ComplexField& g) const;

    /// Symbol: callable (const Vec3& z1, const Vec3& z2, const Vec3& z3) -> Complex or double.
    template <class Symbol>
    ComplexField trilinear(const Symbol& symbol, const ComplexField& f, const ComplexField& g,
                           const ComplexField& h) const;

    /// Pointwise products through 2x zero-padded transforms, truncated to the lattice.
    ComplexField product(const ComplexField& f, const ComplexField& g) const;
    ComplexField product(const ComplexField& f, const ComplexField& g, const ComplexField& h) const;

    struct Mode {
        Index3 k;
        Vec3 zeta;
        Complex coefficient;
    };
    /// Nonzero spectral coefficients of a field.
    std::vector<Mode> modes(const ComplexField& field) const;

private:
    ComplexField pad(const ComplexField& field) const;
    ComplexField truncate(const ComplexField& padded) const;

    const Spectral* spectral_;
    std::shared_ptr<Fft> padded_fft_;
    int padded_n_ = 0;
};

template <class Symbol>
ComplexField MultilinearEngine::bilinear(const Symbol& symbol, const ComplexField& f, const ComplexField& g) const {
    const Spectral& sp = *spectral_;
    sp.check_lattice(f.size(), "bilinear multiplier");
    sp.check_lattice(g.size(), "bilinear multiplier");
    const Grid& grid = sp.grid();
    const auto mf = modes(f);
    const auto mg = modes(g);
    ComplexField out(sp.size(), Complex{});
    for (const Mode& a : mf) {
        for (const Mode& b : mg) {
            const Index3 k{a.k[0] + b.k[0], a.k[1] + b.k[1], a.k[2] + b.k[2]};
            const auto idx = grid.mode_flat(k);
            if (!idx) continue;
            out[*idx] += Complex(symbol(a.zeta, b.zeta)) * a.coefficient * b.coefficient;
        }
    }
    const double scale = 1.0 / grid.volume_r();
    for (Complex& z : out) z *= scale;
    return sp.inverse(std::move(out));
}

template <class Symbol>
ComplexField MultilinearEngine::trilinear(const Symbol& symbol, const ComplexField& f, const ComplexField& g,
                                          const ComplexField& h) const {
    const Spectral& sp = *spectral_;
    sp.check_lattice(f.size(), "trilinear multiplier");
    sp.check_lattice(g.size(), "trilinear multiplier");
    sp.check_lattice(h.size(), "trilinear multiplier");
    const Grid& grid = sp.grid();
    const auto mf = modes(f);
    const auto mg = modes(g);
    const auto mh = modes(h);
    ComplexField out(sp.size(), Complex{});
    for (const Mode& a : mf) {
        for (const Mode& b : mg) {
            const Complex ab = a.coefficient * b.coefficient;
            for (const Mode& c : mh) {
                const Index3 k{a.k[0] + b.k[0] + c.k[0], a.k[1] + b.k[1] + c.k[1], a.k[2] + b.k[2] + c.k[2]};
                const auto idx = grid.mode_flat(k);
                if (!idx) continue;
                out[*idx] += Complex(symbol(a.zeta, b.zeta, c.zeta)) * ab * c.coefficient;
            }
        }
    }
    const double v = grid.volume_r();
    const double scale = 1.0 / (v * v);
    for (Complex& z : out) z *= scale;
    return sp.inverse(std::move(out));
}

} // namespace bec
