#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cryocav/cavity.hpp"

namespace cryocav {

// Temperature-dependent optical resonance frequency, stored as a polynomial
// in T for the *offset* from a fixed reference frequency.  Working in offset
// space keeps detuning arithmetic far from the ~193 THz carrier.
struct ResonanceModel {
    std::vector<double> coefficients;   // Hz per K^k, low order first, deg <= 7
    double t_min = 0.0;                 // K, validity window
    double t_max = 0.0;
    std::optional<double> t_star;       // cached inversion temperature
    double reference_frequency_hz = 193414489032258.06;

    void validate() const;
};

// Polynomial evaluation of the frequency offset (Hz). T is clamped to
// [t_min, t_max]; a degree-7 polynomial diverges violently outside its fit
// window and would corrupt the solvers. Rejects non-finite or negative T.
double eval_resonance(const ResonanceModel& model, double temperature);

// Analytic derivative d nu / dT (Hz/K); zero outside the clamped window,
// matching the derivative of the clamped evaluation.
double resonance_slope(const ResonanceModel& model, double temperature);

// Absolute optical frequency reference + offset (Hz).
double absolute_frequency(const ResonanceModel& model, double temperature);

// Root of d nu/dT located by bracketing + bisection.
// Throws NoInversionError when the slope does not change sign exactly once.
double inversion_temperature(const ResonanceModel& model);

// Resonance position in half-linewidth units: (4 pi n R F / c) * nu(T).
double normalized_shift(const CavityParams& params, const ResonanceModel& model,
                        double temperature);

// Two-column lookup table with strictly increasing abscissae.
struct TemperatureTable {
    std::vector<double> temperature;    // K
    std::vector<double> value;

    void validate(const std::string& what) const;
    double interpolate(double temperature_k, const std::string& what) const;
    bool covers(double temperature_k) const;
};

struct MaterialData {
    TemperatureTable expansion_coefficient;   // alpha(T), 1/K
    TemperatureTable external_index_slope;    // dn_ext/dT, 1/K
    double density = 2200.0;                  // kg/m^3
    double sound_speed = 5900.0;              // m/s
};

// Effective refractive-index contribution dn_eff/dT inferred from the
// resonance shift decomposition  -(1/nu) dnu/dT = alpha + dn_eff/dT.
// Throws OutOfTableError if T is outside the alpha table or model range.
double refractive_contribution(const ResonanceModel& model,
                               const MaterialData& material,
                               double temperature);

// JSON (de)serialization, schema "cryocav.resonance_model/1".
std::string to_json(const ResonanceModel& model);
ResonanceModel resonance_model_from_json(const std::string& text);
ResonanceModel load_resonance_model(const std::string& path);
void save_resonance_model(const ResonanceModel& model, const std::string& path);

}  // namespace cryocav
