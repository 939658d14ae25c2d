#pragma once

#include <string>
#include <vector>

#include "cryocav/cavity.hpp"
#include "cryocav/resonance.hpp"

namespace cryocav {

struct CalibrationSeries {
    std::vector<double> temperature;       // K, strictly increasing
    std::vector<double> frequency_offset;  // Hz, relative to reference line
    double reference_frequency_hz = 193414489032258.06;
    std::string source;

    void validate() const;
};

struct FitReport {
    ResonanceModel model;
    std::vector<double> residuals;      // data - fit, Hz
    double rms_residual = 0.0;          // Hz
    double condition_estimate = 0.0;    // of the scaled normal system
};

// Least-squares polynomial fit of nu(T).  The fit runs in a shifted/scaled
// basis (T mapped to [-1,1]); a raw degree-7 power basis over a cryogenic
// span is catastrophically ill-conditioned.  Only the converted raw
// coefficients are exposed.  Throws InsufficientDataError when points <
// degree+1 and IllConditionedError when the scaled normal system's condition
// estimate exceeds 1e12.
FitReport fit_resonance(const CalibrationSeries& data, int degree);

// Static heating coefficient from the multistability threshold power:
//   chi = (T_star - T0) * pi / (P_thres * K * F)
// the exact algebraic inverse of mu_parameter at mu = T_star - T0.
double extract_chi_stat(double p_threshold, const CavityParams& params,
                        double base_temperature, double t_star);

// Calibration CSV: header row, two columns (temperature_K,
// frequency_offset_hz), '#' comments; an optional directive comment
// '# reference_frequency_hz = <value>' sets the reference line.
// Malformed rows are hard errors carrying line numbers.
CalibrationSeries load_calibration_csv(const std::string& path);

}  // namespace cryocav
