#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cryocav/kernels.hpp"

using namespace cryocav;

TEST_SUITE_BEGIN("kernels");

namespace {

struct KernelInputs {
    std::vector<double> coeffs;
    std::vector<double> intens;
    std::vector<double> temps;
    std::vector<double> omega;
};

KernelInputs make_inputs(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-1e8, 1e8);
    std::uniform_real_distribution<double> inten(1e-4, 1.0);
    std::uniform_real_distribution<double> temp(-5.0, 45.0);
    std::uniform_real_distribution<double> om(1e7, 1e9);
    KernelInputs in;
    for (int k = 0; k < 8; ++k) in.coeffs.push_back(coef(rng));
    for (std::size_t i = 0; i < n; ++i) {
        in.intens.push_back(inten(rng));
        in.temps.push_back(temp(rng));
        in.omega.push_back(om(rng));
    }
    in.intens.back() = 1.0;  // exercise the closure point
    return in;
}

}  // namespace

TEST_CASE("scalar poly kernel matches plain Horner with clamping") {
    const auto in = make_inputs(257, 7);
    std::vector<double> out(in.temps.size());
    kernels::scalar_kernels().poly_eval_clamped(in.coeffs.data(), 8, 1.6, 35.0,
                                                in.temps.data(), out.data(),
                                                out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = std::min(std::max(in.temps[i], 1.6), 35.0);
        double acc = in.coeffs[7];
        for (int k = 6; k >= 0; --k) acc = std::fma(acc, t, in.coeffs[k]);
        CHECK(out[i] == acc);
    }
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
    const kernels::KernelTable* simd = kernels::avx2_kernels();
    if (simd == nullptr) {
        MESSAGE("avx2 kernels not built on this platform; skipping");
        return;
    }
    const auto& ref = kernels::scalar_kernels();
    for (unsigned seed : {1u, 2u, 3u}) {
        // sizes off the vector width on purpose
        for (std::size_t n : {5ul, 64ul, 1001ul}) {
            const auto in = make_inputs(n, seed);
            std::vector<double> a(n), b(n), c(n), d(n);

            ref.poly_eval_clamped(in.coeffs.data(), 8, 1.6, 35.0,
                                  in.temps.data(), a.data(), n);
            simd->poly_eval_clamped(in.coeffs.data(), 8, 1.6, 35.0,
                                    in.temps.data(), b.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);

            ref.branch_assemble(in.coeffs.data(), 8, 1.6, 35.0, 2.3, 16.7,
                                1e-7, in.intens.data(), a.data(), c.data(), n);
            simd->branch_assemble(in.coeffs.data(), 8, 1.6, 35.0, 2.3, 16.7,
                                  1e-7, in.intens.data(), b.data(), d.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(a[i] == b[i]);
                CHECK(c[i] == d[i]);
            }

            ref.static_residual(in.coeffs.data(), 8, 1.6, 35.0, 2.3, 16.7,
                                1e-7, -1.5, in.intens.data(), a.data(), n);
            simd->static_residual(in.coeffs.data(), 8, 1.6, 35.0, 2.3, 16.7,
                                  1e-7, -1.5, in.intens.data(), b.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);

            ref.lorentzian_spectrum(1e-30, 1.5e17, 5e10, in.omega.data(),
                                    a.data(), n);
            simd->lorentzian_spectrum(1e-30, 1.5e17, 5e10, in.omega.data(),
                                      b.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("branch assembly honors the wing guard at I = 1") {
    const auto& ref = kernels::scalar_kernels();
    const double coeffs[2] = {0.0, 0.0};
    const double intens[3] = {0.25, 0.5, 1.0};
    double plus[3], minus[3];
    ref.branch_assemble(coeffs, 2, 0.0, 10.0, 1.0, 0.0, 1.0, intens, plus,
                        minus, 3);
    CHECK(plus[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(plus[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(plus[2] == 0.0);
    CHECK(minus[2] == 0.0);
}

TEST_CASE("backend forcing") {
    CHECK_THROWS(kernels::force_backend("no-such-backend"));
    kernels::force_backend("scalar");
    CHECK(std::string(kernels::active_kernels().name) == "scalar");
    kernels::force_backend("auto");
    if (kernels::avx2_kernels() != nullptr) {
        kernels::force_backend("avx2");
        CHECK(std::string(kernels::active_kernels().name) == "avx2");
        kernels::force_backend("auto");
    }
}

TEST_SUITE_END();
