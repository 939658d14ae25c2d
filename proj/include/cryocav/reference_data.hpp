#pragma once

#include "cryocav/resonance.hpp"
#include "cryocav/tls.hpp"

namespace cryocav {

// Built-in resonance model anchored to the measured calibration values
// (+100 MHz/K at 2 K, inversion at 13.3 K, -135 MHz/K at 30 K, and a
// 4 K -> 13.3 K shift equal to the half-linewidth at finesse 1e4).
// data/reference_resonance.json carries the same coefficients.
const ResonanceModel& reference_model();

// Built-in silica tables (thermal expansion, external index slope) and bulk
// constants; mirrored by data/silica_expansion.csv / silica_index_slope.csv.
const MaterialData& silica_material();

// Shipped TLS fit (data/tls_silica.json).
const TlsModel& silica_tls_fit();

}  // namespace cryocav
