#include "cryocav/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cryocav/csv.hpp"
#include "cryocav/errors.hpp"
#include "cryocav/kernels.hpp"

#include "json.hpp"

namespace cryocav {

namespace {

double horner(const std::vector<double>& c, double t) {
    double acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = std::fma(acc, t, c[k]);
    return acc;
}

std::vector<double> derivative_coefficients(const std::vector<double>& c) {
    std::vector<double> d;
    d.reserve(c.size() > 1 ? c.size() - 1 : 1);
    for (std::size_t k = 1; k < c.size(); ++k) {
        d.push_back(c[k] * static_cast<double>(k));
    }
    if (d.empty()) d.push_back(0.0);
    return d;
}

}  // namespace

void ResonanceModel::validate() const {
    if (coefficients.empty() || coefficients.size() > 8) {
        throw InvalidInput("resonance model needs 1..8 polynomial coefficients");
    }
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw InvalidInput("non-finite model coefficient");
    }
    if (!(t_min < t_max)) {
        throw InvalidInput("resonance model range must satisfy t_min < t_max");
    }
    if (!(reference_frequency_hz > 0.0)) {
        throw InvalidInput("reference frequency must be positive");
    }
}

double eval_resonance(const ResonanceModel& model, double temperature) {
    model.validate();
    if (!std::isfinite(temperature)) {
        throw InvalidInput("temperature must be finite");
    }
    if (!(temperature > 0.0)) {
        throw InvalidInput("temperature must be positive");
    }
    const double t = std::clamp(temperature, model.t_min, model.t_max);
    return horner(model.coefficients, t);
}

double resonance_slope(const ResonanceModel& model, double temperature) {
    model.validate();
    if (!std::isfinite(temperature)) {
        throw InvalidInput("temperature must be finite");
    }
    if (temperature < model.t_min || temperature > model.t_max) {
        return 0.0;  // clamped evaluation is flat outside the window
    }
    return horner(derivative_coefficients(model.coefficients), temperature);
}

double absolute_frequency(const ResonanceModel& model, double temperature) {
    return model.reference_frequency_hz + eval_resonance(model, temperature);
}

double inversion_temperature(const ResonanceModel& model) {
    model.validate();
    const auto d = derivative_coefficients(model.coefficients);
    const auto slope = [&](double t) { return horner(d, t); };

    constexpr int n_scan = 4096;
    const double dt = (model.t_max - model.t_min) / n_scan;
    double lo = 0.0, hi = 0.0;
    int crossings = 0;
    double prev_t = model.t_min;
    double prev_v = slope(prev_t);
    for (int i = 1; i <= n_scan; ++i) {
        const double t = model.t_min + i * dt;
        const double v = slope(t);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0) ||
            (v == 0.0 && i < n_scan)) {
            if (crossings == 0) {
                lo = prev_t;
                hi = t;
            }
            ++crossings;
        }
        prev_t = t;
        prev_v = v;
    }
    if (crossings == 0) {
        throw NoInversionError("resonance slope does not change sign in range");
    }
    if (crossings > 1) {
        throw NoInversionError("resonance slope changes sign more than once");
    }

    double flo = slope(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = slope(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normalized_shift(const CavityParams& params, const ResonanceModel& model,
                        double temperature) {
    return eval_resonance(model, temperature) / half_linewidth(params);
}

void TemperatureTable::validate(const std::string& what) const {
    if (temperature.size() != value.size() || temperature.size() < 2) {
        throw InvalidInput(what + ": table needs >= 2 rows");
    }
    for (std::size_t i = 0; i + 1 < temperature.size(); ++i) {
        if (!(temperature[i] < temperature[i + 1])) {
            throw InvalidInput(what + ": table abscissae must be strictly increasing");
        }
    }
}

bool TemperatureTable::covers(double t) const {
    return !temperature.empty() && t >= temperature.front() &&
           t <= temperature.back();
}

double TemperatureTable::interpolate(double t, const std::string& what) const {
    validate(what);
    if (!covers(t)) {
        std::ostringstream os;
        os << what << ": T = " << t << " K outside table ["
           << temperature.front() << ", " << temperature.back() << "]";
        throw OutOfTableError(os.str());
    }
    const auto it = std::upper_bound(temperature.begin(), temperature.end(), t);
    const std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - temperature.begin()),
        temperature.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == lo) return value[lo];
    const double f = (t - temperature[lo]) / (temperature[hi] - temperature[lo]);
    return value[lo] + f * (value[hi] - value[lo]);
}

double refractive_contribution(const ResonanceModel& model,
                               const MaterialData& material,
                               double temperature) {
    model.validate();
    if (temperature < model.t_min || temperature > model.t_max) {
        throw OutOfTableError("temperature outside the resonance model range");
    }
    const double alpha = material.expansion_coefficient.interpolate(
        temperature, "expansion coefficient");
    const double slope = resonance_slope(model, temperature);
    const double nu = absolute_frequency(model, temperature);
    return -slope / nu - alpha;
}

namespace {

constexpr const char* kModelSchema = "cryocav.resonance_model/1";

}  // namespace

std::string to_json(const ResonanceModel& model) {
    model.validate();
    nlohmann::ordered_json j;
    j["schema"] = kModelSchema;
    j["coefficients"] = model.coefficients;
    j["t_min"] = model.t_min;
    j["t_max"] = model.t_max;
    if (model.t_star) j["t_star"] = *model.t_star;
    j["reference_frequency_hz"] = model.reference_frequency_hz;
    return j.dump(2) + "\n";
}

ResonanceModel resonance_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad model JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != kModelSchema) {
        throw InvalidInput("model JSON missing schema '" +
                           std::string(kModelSchema) + "'");
    }
    ResonanceModel m;
    try {
        m.coefficients = j.at("coefficients").get<std::vector<double>>();
        m.t_min = j.at("t_min").get<double>();
        m.t_max = j.at("t_max").get<double>();
        m.reference_frequency_hz = j.at("reference_frequency_hz").get<double>();
        if (j.contains("t_star") && !j["t_star"].is_null()) {
            m.t_star = j["t_star"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad model JSON: ") + e.what());
    }
    m.validate();
    return m;
}

ResonanceModel load_resonance_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return resonance_model_from_json(ss.str());
}

void save_resonance_model(const ResonanceModel& model, const std::string& path) {
    csv::write_file_atomic(path, to_json(model));
}

}  // namespace cryocav
