#pragma once

// Batch kernels for the grid-parallel inner loops: clamped polynomial
// evaluation, steady-state branch assembly, static-equation residual scans
// and thermal noise spectra.
//
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant selected at runtime.  Both are written so
// results are bit-identical per element (fused multiply-add in the same
// order, IEEE sqrt/div), which the kernel equivalence tests assert.

#include <cstddef>

namespace cryocav::kernels {

struct KernelTable {
    // y[i] = p(clamp(x[i], lo, hi)) with p given by `coeffs[0..ncoef-1]`
    // (power basis, low order first), Horner with FMA.
    void (*poly_eval_clamped)(const double* coeffs, int ncoef, double lo,
                              double hi, const double* x, double* y,
                              std::size_t n);

    // Steady-state branch assembly over an intensity grid: for each i
    //   T      = t0 + mu * intens[i]
    //   shift  = p(clamp(T, lo, hi)) * inv_hl
    //   wing   = sqrt(max(1/intens[i] - 1, 0))
    //   phi_plus[i]  = shift + wing
    //   phi_minus[i] = shift - wing
    void (*branch_assemble)(const double* coeffs, int ncoef, double lo,
                            double hi, double t0, double mu, double inv_hl,
                            const double* intens, double* phi_plus,
                            double* phi_minus, std::size_t n);

    // Residual of the static working-point equation at fixed detuning:
    //   g[i] = 1/intens[i] - 1 - (phi_l - shift(T))^2
    void (*static_residual)(const double* coeffs, int ncoef, double lo,
                            double hi, double t0, double mu, double inv_hl,
                            double phi_l, const double* intens, double* g,
                            std::size_t n);

    // Thermal displacement spectrum of a damped oscillator:
    //   s[i] = c0 / ((w^2 - wm2)^2 + w^2 * g2),  w = omega[i]
    void (*lorentzian_spectrum)(double c0, double wm2, double g2,
                                const double* omega, double* s, std::size_t n);

    const char* name;
};

const KernelTable& scalar_kernels();

// Null when the build or the machine lacks AVX2+FMA.
const KernelTable* avx2_kernels();

// Runtime-selected table. Honors force_backend() and, at first use, the
// CRYOCAV_KERNELS environment variable ("scalar" or "avx2").
const KernelTable& active_kernels();

// Backend override for tests: "auto", "scalar" or "avx2".
// Throws InvalidInput for unknown names or unavailable backends.
void force_backend(const char* name);

}  // namespace cryocav::kernels
