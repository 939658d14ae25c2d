#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cryocav/resonance.hpp"

namespace cryocav {

// Two-level-system dissipation model for amorphous silica: thermally
// activated relaxation over a truncated-Gaussian barrier distribution, plus
// the low-temperature tunneling power law with a saturation level and a
// small constant background.
struct TlsModel {
    double activation_strength = 6.7701245e-3;  // C_act, dimensionless
    double barrier_mean = 448.874675;           // Vbar/kB, K
    double barrier_width = 170.0;               // sigma, K
    double attempt_time = 1e-13;                // tau0, s
    double tunneling_strength = 27408.997672;   // C_tun, K^-3 s^-1
    double tunneling_plateau = 9.0e-4;          // saturation of Q^-1_tun in q_total
    double q_floor = 1.0e-5;                    // residual background loss
    std::string provenance = "paper-anchored fit";

    void validate() const;
};

struct MechMode {
    double frequency = 63e6;             // Omega_m / 2pi, Hz
    double effective_mass = 1e-11;       // kg
    std::optional<double> quality_factor;

    void validate() const;
};

// Thermally activated relaxation loss:
//   Q^-1 = C_act * int P(V) (w tau)/(1 + (w tau)^2) dV,  tau = tau0 e^{V/T}
// adaptive Gauss-Kronrod quadrature over [0, Vbar + 8 sigma], rel tol 1e-6.
double q_inverse_activated(const TlsModel& tls, double temperature,
                           double omega);

// Tunneling-regime power law Q^-1 = C_tun T^3 / omega (exact scaling).
double q_inverse_tunneling(const TlsModel& tls, double temperature,
                           double omega);

// Total quality factor 1/(activated + saturating tunneling + floor).
// The tunneling term enters saturated, p*u/(1+u) with u = Q^-1_tun/p, so the
// power law rolls over onto the plateau instead of growing without bound.
double q_total(const TlsModel& tls, double temperature, double omega);

// Relative frequency shift of the same relaxation model, referenced to t_ref:
//   dW/W(T) - dW/W(T_ref) = -(C_act/2) int P(V) [1/(1+w^2 tau_T^2)
//                                               - 1/(1+w^2 tau_ref^2)] dV
double frequency_shift(const TlsModel& tls, double temperature, double omega,
                       double t_ref);

// TLS saturation displacement sqrt(2 J_sat / (rho c_s Omega^2)).
double saturation_displacement(double j_sat, const MaterialData& material,
                               double omega);

// Classical occupancy kT/(hbar w) and the exact Bose form.
double phonon_occupancy(double temperature, double omega);
double phonon_occupancy_bose(double temperature, double omega);

// Equipartition rms displacement sqrt(kT/(m W^2)).
double brownian_rms(double temperature, const MechMode& mode);

// One-sided thermal displacement spectrum on a frequency grid (Hz -> m^2/Hz):
//   S_x(W) = 4 kB T Wm / (m Q [(W^2-Wm^2)^2 + W^2 Wm^2 / Q^2])
// Its integral over the grid closes to brownian_rms^2.
std::vector<std::pair<double, double>> displacement_spectrum(
    double temperature, const MechMode& mode,
    const std::vector<double>& frequency_grid_hz);

// JSON round trip, schema "cryocav.tls_model/1", with a provenance field.
std::string to_json(const TlsModel& tls);
TlsModel tls_model_from_json(const std::string& text);
TlsModel load_tls_model(const std::string& path);
void save_tls_model(const TlsModel& tls, const std::string& path);

}  // namespace cryocav
