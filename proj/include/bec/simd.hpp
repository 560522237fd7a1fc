#pragma once

// Pointwise kernels used by the hot loops of the kinetic and spectral code.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// compiled into a separate translation unit and selected at runtime when the
// CPU supports it. BEC_SIMD=scalar in the environment forces the reference
// path (useful for bisecting rounding differences).

#include <cstddef>
#include <string_view>

#include "bec/common.hpp"

namespace bec::simd {

struct KernelTable {
    std::string_view name;

    /// sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    /// sum_i w[i] * x[i]
    double (*dot)(const double* x, const double* w, std::size_t n);
    /// sum_i w[i] * x[i]^2
    double (*weighted_sum_sq)(const double* x, const double* w, std::size_t n);
    /// sum_i |z[i]|^2
    double (*norm_sq)(const Complex* z, std::size_t n);
    /// f[i] = e[i]*target + (f[i] - e[i]*target) * decay
    void (*relax)(double* f, const double* e, double target, double decay, std::size_t n);
    /// z[i] *= s[i]   (real symbol)
    void (*scale)(Complex* z, const double* s, std::size_t n);
    /// z[i] *= m[i]   (complex symbol)
    void (*multiply)(Complex* z, const Complex* m, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// The table used by the library; chosen once on first use.
const KernelTable& kernels();

} // namespace bec::simd
