// Frozen reference data. scripts/make_reference_data.py regenerates the
// mirrored files under data/ from the same anchor set; a unit test keeps the
// two in sync.

#include "cryocav/reference_data.hpp"

#include "cryocav/constants.hpp"

namespace cryocav {

const ResonanceModel& reference_model() {
    static const ResonanceModel model = [] {
        ResonanceModel m;
        m.coefficients = {
            -514163360.69554067,   257682673.90661782, -55655954.91644988,
            6441127.500627045,     -423559.0058623741, 15740.357466277423,
            -306.2274585310877,    2.3906562253444594,
        };
        m.t_min = 1.6;
        m.t_max = 35.0;
        m.t_star = 13.3;
        m.reference_frequency_hz = 193414489032258.06;
        return m;
    }();
    return model;
}

const MaterialData& silica_material() {
    static const MaterialData data = [] {
        MaterialData d;
        d.expansion_coefficient.temperature = {
            1.4, 1.6, 1.8, 2.0, 2.3, 2.6, 3.0, 3.5,  4.0, 4.5, 5.0, 5.5,
            6.0, 6.5, 7.0, 7.5, 8.0, 9.0, 10.0, 11.0, 12.0, 13.3, 14.0, 15.0,
            16.0, 18.0, 20.0, 22.0, 25.0, 28.0, 30.0, 32.0, 35.0, 38.0, 40.0,
        };
        d.expansion_coefficient.value = {
            -2.0073515864392912e-10, -2.9912214866321126e-10,
            -4.2506651554484562e-10, -5.8181132745240077e-10,
            -8.8160220954246775e-10, -1.2682056644084537e-09,
            -1.9358664231447166e-09, -3.0461062582730109e-09,
            -4.4997042074087786e-09, -6.3322250066342332e-09,
            -8.5746211766743296e-09, -1.1253081719780447e-08,
            -1.4388985351485603e-08, -1.7998950556672599e-08,
            -2.2094012608016786e-08, -2.6684631746088952e-08,
            -3.1771369822678482e-08, -4.3431081233089785e-08,
            -5.7031651465488308e-08, -7.2487191550198361e-08,
            -8.9680333165599147e-08, -1.1440094128179969e-07,
            -1.2871700670560451e-07, -1.5025940850549859e-07,
            -1.7295062360374198e-07, -2.2121606303161763e-07,
            -2.7248882867292232e-07, -3.2592624747026131e-07,
            -4.0873544723813574e-07, -4.9336050768350551e-07,
            -5.5026651184496959e-07, -6.073237378120955e-07,
            -6.9290221580958409e-07, -7.7822049887360071e-07,
            -8.3487136416482354e-07,
        };
        d.external_index_slope.temperature = {5.0, 8.0, 10.0, 14.0, 18.0, 22.0,
                                              26.0, 30.0, 34.0, 38.0, 40.0};
        d.external_index_slope.value = {6.0e-9, 2.5e-8, 5.0e-8, 1.5e-7,
                                        3.4e-7, 6.2e-7, 9.5e-7, 1.30e-6,
                                        1.72e-6, 2.20e-6, 2.46e-6};
        d.density = constants::silica_density;
        d.sound_speed = constants::silica_sound_speed;
        return d;
    }();
    return data;
}

const TlsModel& silica_tls_fit() {
    static const TlsModel fit = [] {
        TlsModel t;
        t.activation_strength = 6.7701245e-3;
        t.barrier_mean = 448.874675;
        t.barrier_width = 170.0;
        t.attempt_time = 1e-13;
        t.tunneling_strength = 27408.997672;
        t.tunneling_plateau = 9.0e-4;
        t.q_floor = 1.0e-5;
        t.provenance = "paper-anchored fit";
        return t;
    }();
    return fit;
}

}  // namespace cryocav
