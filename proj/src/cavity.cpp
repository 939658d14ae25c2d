#include "cryocav/cavity.hpp"

#include <cmath>

#include "cryocav/constants.hpp"
#include "cryocav/errors.hpp"

namespace cryocav {

void CavityParams::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidInput("cavity radius must be positive");
    }
    if (!(index > 0.0) || !std::isfinite(index)) {
        throw InvalidInput("refractive index must be positive");
    }
    if (!(finesse > 0.0) || !std::isfinite(finesse)) {
        throw InvalidInput("finesse must be positive");
    }
    if (!(coupling >= 0.0 && coupling <= 1.0)) {
        throw InvalidInput("coupling efficiency must lie in [0, 1]");
    }
    if (!(evanescent_fraction >= 0.0 && evanescent_fraction <= 1.0)) {
        throw InvalidInput("evanescent fraction must lie in [0, 1]");
    }
    if (!(laser_frequency > 0.0)) {
        throw InvalidInput("laser frequency must be positive");
    }
}

double half_linewidth(const CavityParams& params) {
    params.validate();
    return constants::c_light /
           (4.0 * constants::pi * params.index * params.radius * params.finesse);
}

double max_circulating_power(double input_power, const CavityParams& params) {
    params.validate();
    if (input_power < 0.0 || !std::isfinite(input_power)) {
        throw InvalidInput("input power must be non-negative");
    }
    return input_power * params.coupling * params.finesse / constants::pi;
}

double mu_parameter(double input_power, const CavityParams& params,
                    double chi_stat) {
    if (chi_stat < 0.0 || !std::isfinite(chi_stat)) {
        throw InvalidInput("chi_stat must be non-negative");
    }
    return max_circulating_power(input_power, params) * chi_stat;
}

}  // namespace cryocav
