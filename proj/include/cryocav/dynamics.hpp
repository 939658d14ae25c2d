#pragma once

#include <cstddef>
#include <vector>

#include "cryocav/cavity.hpp"
#include "cryocav/resonance.hpp"
#include "cryocav/steady_state.hpp"

namespace cryocav {

// Single-port transmission 1 - K(2-K)*I: zero on resonance at critical
// coupling, unity far off resonance or uncoupled.
double transmission(double i_tilde, double coupling);

// Thermal response reduced to a single relaxation pole: the static heating
// coefficient fixes the integral of the kernel, tau_thermal its memory.
struct ThermalKernel {
    double chi_stat = 4.5;        // K/W of circulating power
    double tau_thermal = 1e-3;    // s

    void validate() const;
};

struct FieldState {
    double field_re = 0.0;        // Re(alpha~)
    double field_im = 0.0;        // Im(alpha~)
    double temperature_rise = 0.0;// delta T, K
    double time = 0.0;            // s
};

// Time derivative of the coupled field/temperature system at fixed phi_l:
//   d(alpha~)/dt = Omega_c [(-1 + i phi) alpha~ + 1],  phi = phi_l - shift
//   d(dT)/dt     = (chi * P_max * I - dT) / tau
// The returned FieldState carries rates in its fields and d(time)/dt = 1.
FieldState derivative(const FieldState& state, double phi_l,
                      const ThermalKernel& kernel, const CavityParams& params,
                      const ResonanceModel& model, double base_temperature,
                      double input_power);

struct SweepConfig {
    double phi_start = 5.0;
    double phi_end = -5.0;
    double scan_rate = 50.0;          // half-linewidths per second, sign ignored
    double input_power = 0.0;         // W
    double base_temperature = 4.0;    // K
    double rel_tol = 1e-8;
    std::size_t n_samples = 2001;     // uniformly spaced phi_l output samples
    double settle_factor = 10.0;      // hold at phi_start for this many tau

    void validate() const;
};

struct SweepSample {
    double time = 0.0;                // s
    double phi_l = 0.0;
    double i_tilde = 0.0;
    double temperature_rise = 0.0;
    double transmission = 0.0;
};

// Adaptive Dormand-Prince integration of a laser-frequency sweep, sampled at
// n_samples uniform detunings.  Throws StiffnessError if the step collapses
// below 1e-6/Omega_c.
std::vector<SweepSample> integrate_sweep(const SweepConfig& config,
                                         const ThermalKernel& kernel,
                                         const CavityParams& params,
                                         const ResonanceModel& model);

// Relaxation at fixed detuning with the same integrator; used for settling
// and transient checks.
FieldState evolve_fixed_detuning(const FieldState& initial, double phi_l,
                                 double duration, const ThermalKernel& kernel,
                                 const CavityParams& params,
                                 const ResonanceModel& model,
                                 double base_temperature, double input_power,
                                 double rel_tol = 1e-8);

enum class Stability { stable, unstable, marginal };

// Eigenvalues of the analytic 3x3 Jacobian at a static working point.
// Marginal when an eigenvalue's real part is within 1e-9*Omega_c of zero.
Stability linear_stability(const BranchPoint& point, const ThermalKernel& kernel,
                           const CavityParams& params, const ResonanceModel& model,
                           double base_temperature, double input_power);

// Largest eigenvalue real part in units of Omega_c (diagnostic for tests).
double leading_eigenvalue(const BranchPoint& point, const ThermalKernel& kernel,
                          const CavityParams& params, const ResonanceModel& model,
                          double base_temperature, double input_power);

std::string sweep_csv(const std::vector<SweepSample>& samples,
                      const std::vector<std::string>& header_comments);

}  // namespace cryocav
