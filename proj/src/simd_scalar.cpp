#include "bec/simd.hpp"

#include <cstdlib>
#include <string>

#include "simd_avx2.hpp"

namespace bec::simd {
namespace {

double sum_ref(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_ref(const double* x, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i];
    return s;
}

double weighted_sum_sq_ref(const double* x, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
    return s;
}

double norm_sq_ref(const Complex* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(z[i]);
    return s;
}

void relax_ref(double* f, const double* e, double target, double decay, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double eq = e[i] * target;
        f[i] = eq + (f[i] - eq) * decay;
    }
}

void scale_ref(Complex* z, const double* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= s[i];
}

void multiply_ref(Complex* z, const Complex* m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        // Written out so the reference does not depend on the library's
        // inf/nan handling in operator*.
        const double re = z[i].real() * m[i].real() - z[i].imag() * m[i].imag();
        const double im = z[i].real() * m[i].imag() + z[i].imag() * m[i].real();
        z[i] = Complex(re, im);
    }
}

const KernelTable kScalar{
    "scalar", sum_ref, dot_ref, weighted_sum_sq_ref, norm_sq_ref, relax_ref, scale_ref, multiply_ref,
};

const KernelTable& select() {
    if (const char* env = std::getenv("BEC_SIMD")) {
        if (std::string(env) == "scalar") return kScalar;
    }
    if (const KernelTable* t = avx2_kernels()) return *t;
    return kScalar;
}

} // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(BEC_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() {
    static const KernelTable& table = select();
    return table;
}

} // namespace bec::simd
