// Scalar reference kernels. Horner uses std::fma and clamping uses min/max
// so the AVX2 variants can match these results bit for bit.

#include "cryocav/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cryocav::kernels {

namespace {

inline double horner_clamped(const double* coeffs, int ncoef, double lo,
                             double hi, double x) {
    const double t = std::min(std::max(x, lo), hi);
    double acc = coeffs[ncoef - 1];
    for (int k = ncoef - 2; k >= 0; --k) {
        acc = std::fma(acc, t, coeffs[k]);
    }
    return acc;
}

void poly_eval_clamped_scalar(const double* coeffs, int ncoef, double lo,
                              double hi, const double* x, double* y,
                              std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = horner_clamped(coeffs, ncoef, lo, hi, x[i]);
    }
}

void branch_assemble_scalar(const double* coeffs, int ncoef, double lo,
                            double hi, double t0, double mu, double inv_hl,
                            const double* intens, double* phi_plus,
                            double* phi_minus, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double temp = std::fma(mu, intens[i], t0);
        const double shift = horner_clamped(coeffs, ncoef, lo, hi, temp) * inv_hl;
        const double w2 = std::max(1.0 / intens[i] - 1.0, 0.0);
        const double wing = std::sqrt(w2);
        phi_plus[i] = shift + wing;
        phi_minus[i] = shift - wing;
    }
}

void static_residual_scalar(const double* coeffs, int ncoef, double lo,
                            double hi, double t0, double mu, double inv_hl,
                            double phi_l, const double* intens, double* g,
                            std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double temp = std::fma(mu, intens[i], t0);
        const double shift = horner_clamped(coeffs, ncoef, lo, hi, temp) * inv_hl;
        const double u = phi_l - shift;
        g[i] = (1.0 / intens[i] - 1.0) - u * u;
    }
}

void lorentzian_spectrum_scalar(double c0, double wm2, double g2,
                                const double* omega, double* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double w2 = omega[i] * omega[i];
        const double a = w2 - wm2;
        const double denom = std::fma(a, a, w2 * g2);
        s[i] = c0 / denom;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        poly_eval_clamped_scalar, branch_assemble_scalar,
        static_residual_scalar, lorentzian_spectrum_scalar, "scalar"};
    return table;
}

}  // namespace cryocav::kernels
