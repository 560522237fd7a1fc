// AVX2 + FMA kernels. This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the runtime-dispatched table.

#include "simd_avx2.hpp"

#include <immintrin.h>

namespace bec::simd::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_avx2(const double* x, const double* w, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4), a1);
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i), a0);
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += w[i] * x[i];
    return s;
}

double weighted_sum_sq_avx2(const double* x, const double* w, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d x0 = _mm256_loadu_pd(x + i);
        const __m256d x1 = _mm256_loadu_pd(x + i + 4);
        a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), x0), x0, a0);
        a1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), x1), x1, a1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(x + i);
        a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), x0), x0, a0);
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += w[i] * x[i] * x[i];
    return s;
}

double norm_sq_avx2(const Complex* z, std::size_t n) {
    // std::complex<double> is layout-compatible with double[2].
    const double* d = reinterpret_cast<const double*>(z);
    const std::size_t m = 2 * n;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= m; i += 8) {
        const __m256d x0 = _mm256_loadu_pd(d + i);
        const __m256d x1 = _mm256_loadu_pd(d + i + 4);
        a0 = _mm256_fmadd_pd(x0, x0, a0);
        a1 = _mm256_fmadd_pd(x1, x1, a1);
    }
    for (; i + 4 <= m; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(d + i);
        a0 = _mm256_fmadd_pd(x0, x0, a0);
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < m; ++i) s += d[i] * d[i];
    return s;
}

void relax_avx2(double* f, const double* e, double target, double decay, std::size_t n) {
    const __m256d t = _mm256_set1_pd(target);
    const __m256d d = _mm256_set1_pd(decay);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d eq = _mm256_mul_pd(_mm256_loadu_pd(e + i), t);
        const __m256d dev = _mm256_sub_pd(_mm256_loadu_pd(f + i), eq);
        _mm256_storeu_pd(f + i, _mm256_fmadd_pd(dev, d, eq));
    }
    for (; i < n; ++i) {
        const double eq = e[i] * target;
        f[i] = eq + (f[i] - eq) * decay;
    }
}

void scale_avx2(Complex* z, const double* s, std::size_t n) {
    double* d = reinterpret_cast<double*>(z);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // [s0 s0 s1 s1]
        const __m256d sv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(s + i)), 0x50);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), sv));
    }
    for (; i < n; ++i) z[i] *= s[i];
}

void multiply_avx2(Complex* z, const Complex* m, std::size_t n) {
    double* d = reinterpret_cast<double*>(z);
    const double* md = reinterpret_cast<const double*>(m);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d a = _mm256_loadu_pd(d + 2 * i);   // [ar ai br bi]
        const __m256d b = _mm256_loadu_pd(md + 2 * i);  // [cr ci dr di]
        const __m256d b_re = _mm256_movedup_pd(b);       // [cr cr dr dr]
        const __m256d b_im = _mm256_permute_pd(b, 0xF);  // [ci ci di di]
        const __m256d a_sw = _mm256_permute_pd(a, 0x5);  // [ai ar bi br]
        // (ar*cr - ai*ci, ai*cr + ar*ci)
        _mm256_storeu_pd(d + 2 * i, _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im)));
    }
    for (; i < n; ++i) {
        const double re = z[i].real() * m[i].real() - z[i].imag() * m[i].imag();
        const double im = z[i].real() * m[i].imag() + z[i].imag() * m[i].real();
        z[i] = Complex(re, im);
    }
}

const KernelTable kAvx2{
    "avx2", sum_avx2, dot_avx2, weighted_sum_sq_avx2, norm_sq_avx2, relax_avx2, scale_avx2, multiply_avx2,
};

} // namespace

const KernelTable& avx2_table() { return kAvx2; }

} // namespace bec::simd::detail
