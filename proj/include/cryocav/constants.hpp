#pragma once

namespace cryocav::constants {

inline constexpr double c_light = 299792458.0;          // m/s
inline constexpr double planck = 6.62607015e-34;        // J s
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double pi = 3.141592653589793238462643383279502884;

// silica bulk defaults used when no material table is supplied
inline constexpr double silica_index = 1.44;
inline constexpr double silica_density = 2200.0;        // kg/m^3
inline constexpr double silica_sound_speed = 5900.0;    // m/s

}  // namespace cryocav::constants
