// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86-64 only; the
// dispatcher checks cpu support before handing these out. Per element the
// operation order matches the scalar reference exactly (vfmadd Horner, IEEE
// sqrt/div), so outputs are bit-identical.

#include "cryocav/kernels.hpp"

#if defined(__x86_64__) && defined(CRYOCAV_BUILD_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace cryocav::kernels {

namespace {

inline __m256d horner4(const double* coeffs, int ncoef, __m256d lo, __m256d hi,
                       __m256d x) {
    const __m256d t = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
    __m256d acc = _mm256_set1_pd(coeffs[ncoef - 1]);
    for (int k = ncoef - 2; k >= 0; --k) {
        acc = _mm256_fmadd_pd(acc, t, _mm256_set1_pd(coeffs[k]));
    }
    return acc;
}

inline double horner1(const double* coeffs, int ncoef, double lo, double hi,
                      double x) {
    const double t = std::min(std::max(x, lo), hi);
    double acc = coeffs[ncoef - 1];
    for (int k = ncoef - 2; k >= 0; --k) acc = std::fma(acc, t, coeffs[k]);
    return acc;
}

void poly_eval_clamped_avx2(const double* coeffs, int ncoef, double lo,
                            double hi, const double* x, double* y,
                            std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, horner4(coeffs, ncoef, vlo, vhi,
                                        _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = horner1(coeffs, ncoef, lo, hi, x[i]);
}

void branch_assemble_avx2(const double* coeffs, int ncoef, double lo,
                          double hi, double t0, double mu, double inv_hl,
                          const double* intens, double* phi_plus,
                          double* phi_minus, std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
    const __m256d vt0 = _mm256_set1_pd(t0), vmu = _mm256_set1_pd(mu);
    const __m256d vinv = _mm256_set1_pd(inv_hl);
    const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vi = _mm256_loadu_pd(intens + i);
        const __m256d temp = _mm256_fmadd_pd(vmu, vi, vt0);
        const __m256d shift =
            _mm256_mul_pd(horner4(coeffs, ncoef, vlo, vhi, temp), vinv);
        const __m256d w2 =
            _mm256_max_pd(_mm256_sub_pd(_mm256_div_pd(one, vi), one), zero);
        const __m256d wing = _mm256_sqrt_pd(w2);
        _mm256_storeu_pd(phi_plus + i, _mm256_add_pd(shift, wing));
        _mm256_storeu_pd(phi_minus + i, _mm256_sub_pd(shift, wing));
    }
    for (; i < n; ++i) {
        const double temp = std::fma(mu, intens[i], t0);
        const double shift = horner1(coeffs, ncoef, lo, hi, temp) * inv_hl;
        const double wing = std::sqrt(std::max(1.0 / intens[i] - 1.0, 0.0));
        phi_plus[i] = shift + wing;
        phi_minus[i] = shift - wing;
    }
}

void static_residual_avx2(const double* coeffs, int ncoef, double lo,
                          double hi, double t0, double mu, double inv_hl,
                          double phi_l, const double* intens, double* g,
                          std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
    const __m256d vt0 = _mm256_set1_pd(t0), vmu = _mm256_set1_pd(mu);
    const __m256d vinv = _mm256_set1_pd(inv_hl), vphi = _mm256_set1_pd(phi_l);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vi = _mm256_loadu_pd(intens + i);
        const __m256d temp = _mm256_fmadd_pd(vmu, vi, vt0);
        const __m256d shift =
            _mm256_mul_pd(horner4(coeffs, ncoef, vlo, vhi, temp), vinv);
        const __m256d u = _mm256_sub_pd(vphi, shift);
        const __m256d lor = _mm256_sub_pd(_mm256_div_pd(one, vi), one);
        _mm256_storeu_pd(g + i, _mm256_sub_pd(lor, _mm256_mul_pd(u, u)));
    }
    for (; i < n; ++i) {
        const double temp = std::fma(mu, intens[i], t0);
        const double shift = horner1(coeffs, ncoef, lo, hi, temp) * inv_hl;
        const double u = phi_l - shift;
        g[i] = (1.0 / intens[i] - 1.0) - u * u;
    }
}

void lorentzian_spectrum_avx2(double c0, double wm2, double g2,
                              const double* omega, double* s, std::size_t n) {
    const __m256d vc0 = _mm256_set1_pd(c0), vwm2 = _mm256_set1_pd(wm2);
    const __m256d vg2 = _mm256_set1_pd(g2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d w = _mm256_loadu_pd(omega + i);
        const __m256d w2 = _mm256_mul_pd(w, w);
        const __m256d a = _mm256_sub_pd(w2, vwm2);
        const __m256d denom = _mm256_fmadd_pd(a, a, _mm256_mul_pd(w2, vg2));
        _mm256_storeu_pd(s + i, _mm256_div_pd(vc0, denom));
    }
    for (; i < n; ++i) {
        const double w2 = omega[i] * omega[i];
        const double a = w2 - wm2;
        s[i] = c0 / std::fma(a, a, w2 * g2);
    }
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{poly_eval_clamped_avx2, branch_assemble_avx2,
                                   static_residual_avx2,
                                   lorentzian_spectrum_avx2, "avx2"};
    return &table;
}

}  // namespace cryocav::kernels

#else

namespace cryocav::kernels {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace cryocav::kernels

#endif
