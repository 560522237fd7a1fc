#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bec/simd.hpp"

using namespace bec;

namespace {

struct Inputs {
    std::vector<double> x, w, e;
    std::vector<Complex> z, m;
};

Inputs make_inputs(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Inputs in;
    for (std::size_t i = 0; i < n; ++i) {
        in.x.push_back(u(rng));
        in.w.push_back(std::abs(u(rng)) + 0.1);
        in.e.push_back(std::abs(u(rng)));
        in.z.emplace_back(u(rng), u(rng));
        in.m.emplace_back(u(rng), u(rng));
    }
    return in;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_SUITE("simd") {

TEST_CASE("kernel table is populated and selectable")
{
    const auto& s = simd::scalar_kernels();
    CHECK(s.name == "scalar");
    const auto& active = simd::kernels();
    CHECK(active.sum != nullptr);
    CHECK(active.multiply != nullptr);
}

TEST_CASE("avx2 kernels agree with the scalar reference on every tail length")
{
    const simd::KernelTable* v = simd::avx2_kernels();
    if (v == nullptr) {
        MESSAGE("AVX2 variant unavailable; skipping");
        return;
    }
    const auto& s = simd::scalar_kernels();
    for (std::size_t n = 0; n <= 67; ++n) {
        CAPTURE(n);
        const Inputs in = make_inputs(n, 100 + static_cast<unsigned>(n));
        CHECK(rel(v->sum(in.x.data(), n), s.sum(in.x.data(), n)) < 1e-14);
        CHECK(rel(v->dot(in.x.data(), in.w.data(), n), s.dot(in.x.data(), in.w.data(), n)) < 1e-14);
        CHECK(rel(v->weighted_sum_sq(in.x.data(), in.w.data(), n), s.weighted_sum_sq(in.x.data(), in.w.data(), n)) <
              1e-14);
        CHECK(rel(v->norm_sq(in.z.data(), n), s.norm_sq(in.z.data(), n)) < 1e-14);

        auto f1 = in.x, f2 = in.x;
        v->relax(f1.data(), in.e.data(), 0.7, 0.3, n);
        s.relax(f2.data(), in.e.data(), 0.7, 0.3, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(f1[i] == doctest::Approx(f2[i]).epsilon(1e-15));

        auto z1 = in.z, z2 = in.z;
        v->scale(z1.data(), in.w.data(), n);
        s.scale(z2.data(), in.w.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) < 1e-15);

        z1 = in.z;
        z2 = in.z;
        v->multiply(z1.data(), in.m.data(), n);
        s.multiply(z2.data(), in.m.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) < 1e-15);
    }
}

TEST_CASE("scalar kernels match their definitions")
{
    const auto& s = simd::scalar_kernels();
    const Inputs in = make_inputs(13, 7);
    double sum = 0, dot = 0, wss = 0, nsq = 0;
    for (std::size_t i = 0; i < 13; ++i) {
        sum += in.x[i];
        dot += in.w[i] * in.x[i];
        wss += in.w[i] * in.x[i] * in.x[i];
        nsq += std::norm(in.z[i]);
    }
    CHECK(s.sum(in.x.data(), 13) == doctest::Approx(sum).epsilon(1e-14));
    CHECK(s.dot(in.x.data(), in.w.data(), 13) == doctest::Approx(dot).epsilon(1e-14));
    CHECK(s.weighted_sum_sq(in.x.data(), in.w.data(), 13) == doctest::Approx(wss).epsilon(1e-14));
    CHECK(s.norm_sq(in.z.data(), 13) == doctest::Approx(nsq).epsilon(1e-14));

    auto f = in.x;
    s.relax(f.data(), in.e.data(), 2.0, 0.25, 13);
    for (std::size_t i = 0; i < 13; ++i)
        CHECK(f[i] == doctest::Approx(in.e[i] * 2.0 + (in.x[i] - in.e[i] * 2.0) * 0.25).epsilon(1e-14));
}

}
