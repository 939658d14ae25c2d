#pragma once

#include <string>

namespace cryocav {

// Geometry and coupling of a whispering-gallery resonator.
struct CavityParams {
    double radius = 30e-6;                    // m
    double index = 1.44;                      // refractive index of silica
    double finesse = 44000.0;
    double coupling = 1.0;                    // K in [0,1], 1 = impedance matched
    double laser_frequency = 193414489032258.06;  // Hz (1550 nm line)
    double evanescent_fraction = 0.01;        // eta in [0,1]

    void validate() const;
};

// Cavity half-linewidth c/(4 pi n R F) in Hz; the full linewidth is twice this.
double half_linewidth(const CavityParams& params);

// Maximum circulating power P_in * K * F / pi for a given input power (W).
double max_circulating_power(double input_power, const CavityParams& params);

// Maximum light-induced heating mu = P_in * K * (F/pi) * chi_stat, in K.
double mu_parameter(double input_power, const CavityParams& params,
                    double chi_stat);

}  // namespace cryocav
