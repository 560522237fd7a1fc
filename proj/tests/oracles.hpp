#pragma once
// Independent reference computations for the tests. Nothing here calls the
// library's transforms or operators; grids are described by plain numbers.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using std::numbers::pi;

/// Signed wavenumber of FFT index i on n points.
inline int signed_mode(int i, int n) { return i >= n / 2 ? i - n : i; }

/// hat(k) = dx sum_j f_j exp(-i k x_j), x_j = j L / n (1-D).
inline std::vector<cplx> dft_1d(const std::vector<cplx>& f, double length)
{
    const int n = static_cast<int>(f.size());
    const double dx = length / n;
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const double k = 2.0 * pi * signed_mode(i, n) / length;
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += f[j] * std::polar(1.0, -k * j * dx);
        out[i] = s * dx;
    }
    return out;
}

/// 2-D version, row-major (axis 0 outer).
inline std::vector<cplx> dft_2d(const std::vector<cplx>& f, int n, double length)
{
    const double dx = length / n;
    std::vector<cplx> out(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double ka = 2.0 * pi * signed_mode(a, n) / length;
            const double kb = 2.0 * pi * signed_mode(b, n) / length;
            cplx s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += f[i * n + j] * std::polar(1.0, -(ka * i + kb * j) * dx);
            out[a * n + b] = s * dx * dx;
        }
    return out;
}

/// f(x_j) = (1/L) sum_k hat(k) exp(i k x_j) (1-D).
inline std::vector<cplx> idft_1d(const std::vector<cplx>& hat, double length)
{
    const int n = static_cast<int>(hat.size());
    const double dx = length / n;
    std::vector<cplx> out(n);
    for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) s += hat[i] * std::polar(1.0, 2.0 * pi * signed_mode(i, n) / length * j * dx);
        out[j] = s / length;
    }
    return out;
}

inline std::vector<cplx> idft_2d(const std::vector<cplx>& hat, int n, double length)
{
    const double dx = length / n;
    std::vector<cplx> out(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double ka = 2.0 * pi * signed_mode(a, n) / length;
                    const double kb = 2.0 * pi * signed_mode(b, n) / length;
                    s += hat[a * n + b] * std::polar(1.0, (ka * i + kb * j) * dx);
                }
            out[i * n + j] = s / (length * length);
        }
    return out;
}

using Freq = std::array<double, 3>;
using Symbol2 = std::function<double(const Freq&, const Freq&)>;
using Symbol3 = std::function<double(const Freq&, const Freq&, const Freq&)>;

/// Brute-force 1-D bilinear convolution sum
///   out^(k) = L^{-1} sum_{k1 + k2 = k} B(z1, z2) f^(k1) g^(k2),
/// keeping only k inside the lattice [-n/2, n/2).
inline std::vector<cplx> bilinear_1d(const Symbol2& B, const std::vector<cplx>& f, const std::vector<cplx>& g,
                                     double length)
{
    const int n = static_cast<int>(f.size());
    const auto fh = dft_1d(f, length), gh = dft_1d(g, length);
    std::vector<cplx> out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int k1 = signed_mode(i, n), k2 = signed_mode(j, n), k = k1 + k2;
            if (k < -n / 2 || k >= n / 2) continue;
            const Freq z1{2 * pi * k1 / length, 0, 0}, z2{2 * pi * k2 / length, 0, 0};
            out[(k + n) % n] += B(z1, z2) * fh[i] * gh[j];
        }
    for (auto& z : out) z /= length;
    return idft_1d(out, length);
}

inline std::vector<cplx> trilinear_1d(const Symbol3& C, const std::vector<cplx>& f, const std::vector<cplx>& g,
                                      const std::vector<cplx>& h, double length)
{
    const int n = static_cast<int>(f.size());
    const auto fh = dft_1d(f, length), gh = dft_1d(g, length), hh = dft_1d(h, length);
    std::vector<cplx> out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const int k1 = signed_mode(i, n), k2 = signed_mode(j, n), k3 = signed_mode(l, n);
                const int k = k1 + k2 + k3;
                if (k < -n / 2 || k >= n / 2) continue;
                const Freq z1{2 * pi * k1 / length, 0, 0}, z2{2 * pi * k2 / length, 0, 0},
                    z3{2 * pi * k3 / length, 0, 0};
                out[(k + n) % n] += C(z1, z2, z3) * fh[i] * gh[j] * hh[l];
            }
    for (auto& z : out) z /= length * length;
    return idft_1d(out, length);
}

/// 2-D bilinear convolution sum on an n x n lattice.
inline std::vector<cplx> bilinear_2d(const Symbol2& B, const std::vector<cplx>& f, const std::vector<cplx>& g, int n,
                                     double length)
{
    const auto fh = dft_2d(f, n, length), gh = dft_2d(g, n, length);
    std::vector<cplx> out(static_cast<std::size_t>(n * n), 0.0);
    const auto in_lattice = [&](int k) { return k >= -n / 2 && k < n / 2; };
    for (int a1 = 0; a1 < n; ++a1)
        for (int b1 = 0; b1 < n; ++b1)
            for (int a2 = 0; a2 < n; ++a2)
                for (int b2 = 0; b2 < n; ++b2) {
                    const int ka1 = signed_mode(a1, n), kb1 = signed_mode(b1, n);
                    const int ka2 = signed_mode(a2, n), kb2 = signed_mode(b2, n);
                    const int ka = ka1 + ka2, kb = kb1 + kb2;
                    if (!in_lattice(ka) || !in_lattice(kb)) continue;
                    const double u = 2 * pi / length;
                    const Freq z1{u * ka1, u * kb1, 0}, z2{u * ka2, u * kb2, 0};
                    out[((ka + n) % n) * n + (kb + n) % n] += B(z1, z2) * fh[a1 * n + b1] * gh[a2 * n + b2];
                }
    for (auto& z : out) z /= length * length;
    return idft_2d(out, n, length);
}

/// Bose-Einstein profile 1 / (exp(sqrt(p^2 + eps^2)) - 1), unnormalized.
inline double bose_einstein(double abs_p, double eps)
{
    return 1.0 / std::expm1(std::sqrt(abs_p * abs_p + eps * eps));
}

/// Dense 1-D momentum L2 matrix for the divergence form, N_c = 1:
///   (A g)_i = E_i h^{-2} [a_{i+1/2} (g_{i+1} - g_i) - a_{i-1/2} (g_i - g_{i-1})],
/// a = 1/E at face midpoints, zero flux at the box ends. E carries constant c.
inline std::vector<std::vector<double>> dense_l2_1d(int n, double p_max, double shift, double eps, double c)
{
    const double h = 2.0 * p_max / n;
    const auto node = [&](int i) { return -p_max + shift + i * h; };
    const auto E = [&](double p) { return c * bose_einstein(std::abs(p), eps); };
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        const double ei = E(node(i));
        if (i + 1 < n) {
            const double a = 1.0 / E(node(i) + 0.5 * h);
            A[i][i] -= ei * a / (h * h);
            A[i][i + 1] += ei * a / (h * h);
        }
        if (i > 0) {
            const double a = 1.0 / E(node(i) - 0.5 * h);
            A[i][i] -= ei * a / (h * h);
            A[i][i - 1] += ei * a / (h * h);
        }
    }
    return A;
}

/// Gaussian elimination with partial pivoting; solves A x = b.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

inline std::vector<cplx> random_field(std::size_t n, std::uint64_t seed, bool real_only = false)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> f(n);
    for (auto& z : f) {
        const double re = nd(rng);
        const double im = nd(rng);
        z = real_only ? cplx(re, 0.0) : cplx(re, im);
    }
    return f;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<cplx>& a)
{
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

} // namespace oracle
