// Two-level-system dissipation model and Brownian-motion diagnostics.

#include "cryocav/tls.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "cryocav/constants.hpp"
#include "cryocav/csv.hpp"
#include "cryocav/errors.hpp"
#include "cryocav/kernels.hpp"

#include "json.hpp"

namespace cryocav {

void TlsModel::validate() const {
    if (!(activation_strength > 0.0) || !(barrier_mean > 0.0) ||
        !(barrier_width > 0.0) || !(attempt_time > 0.0) ||
        !(tunneling_strength > 0.0)) {
        throw InvalidInput("TLS model parameters must be positive");
    }
    if (!(tunneling_plateau >= 0.0) || !(q_floor >= 0.0)) {
        throw InvalidInput("TLS plateau and floor must be non-negative");
    }
}

void MechMode::validate() const {
    if (!(frequency > 0.0)) throw InvalidInput("mode frequency must be positive");
    if (!(effective_mass > 0.0)) {
        throw InvalidInput("effective mass must be positive");
    }
}

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kKronrodX[i]);
        kron += kKronrodW[i] * v;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * v;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

// adaptive quadrature over [a, b], relative tolerance `tol`
double adapt_quad(const std::function<double(double)>& f, double a, double b,
                  double tol) {
    std::vector<Panel> panels;
    constexpr int kInitial = 64;
    for (int i = 0; i < kInitial; ++i) {
        const double pa = a + (b - a) * i / kInitial;
        const double pb = a + (b - a) * (i + 1) / kInitial;
        panels.push_back(gk15(f, pa, pb));
    }
    for (int round = 0; round < 4000; ++round) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (err <= tol * std::max(std::abs(total), 1e-300)) return total;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = gk15(f, p.a, mid);
        panels.push_back(gk15(f, mid, p.b));
    }
    double total = 0.0;
    for (const auto& p : panels) total += p.value;
    return total;
}

// normalized truncated-Gaussian barrier distribution P(V) on V >= 0
struct BarrierDistribution {
    double mean, width, norm;

    explicit BarrierDistribution(const TlsModel& tls)
        : mean(tls.barrier_mean), width(tls.barrier_width) {
        const double cdf_tail =
            0.5 * (1.0 + std::erf(mean / (width * std::sqrt(2.0))));
        norm = width * std::sqrt(2.0 * constants::pi) * cdf_tail;
    }

    double operator()(double v) const {
        const double z = (v - mean) / width;
        return std::exp(-0.5 * z * z) / norm;
    }
};

// Debye factor w*tau/(1 + (w*tau)^2) = 1/(2 cosh L), L = ln(w*tau)
double debye_factor(double log_wtau) {
    if (std::abs(log_wtau) > 700.0) return 0.0;
    return 0.5 / std::cosh(log_wtau);
}

// dispersive partner 1/(1 + (w*tau)^2)
double dispersion_factor(double log_wtau) {
    if (log_wtau > 350.0) return 0.0;
    if (log_wtau < -350.0) return 1.0;
    const double e = std::exp(2.0 * log_wtau);
    return 1.0 / (1.0 + e);
}

void check_t_omega(double temperature, double omega) {
    if (!(temperature > 0.0)) throw InvalidInput("temperature must be positive");
    if (!(omega > 0.0)) throw InvalidInput("angular frequency must be positive");
}

}  // namespace

double q_inverse_activated(const TlsModel& tls, double temperature,
                           double omega) {
    tls.validate();
    check_t_omega(temperature, omega);
    const BarrierDistribution dist(tls);
    const double log_wtau0 = std::log(omega * tls.attempt_time);
    const double hi = tls.barrier_mean + 8.0 * tls.barrier_width;
    const double integral = adapt_quad(
        [&](double v) {
            return dist(v) * debye_factor(log_wtau0 + v / temperature);
        },
        0.0, hi, 1e-6);
    return tls.activation_strength * integral;
}

double q_inverse_tunneling(const TlsModel& tls, double temperature,
                           double omega) {
    tls.validate();
    check_t_omega(temperature, omega);
    return tls.tunneling_strength * temperature * temperature * temperature /
           omega;
}

double q_total(const TlsModel& tls, double temperature, double omega) {
    const double activated = q_inverse_activated(tls, temperature, omega);
    const double tunneling = q_inverse_tunneling(tls, temperature, omega);
    // the pure power law saturates onto the plateau before the activated
    // peak takes over; without the rollover the T^3 growth would swamp the
    // 50 K maximum
    const double tun_effective =
        tls.tunneling_plateau > 0.0
            ? tls.tunneling_plateau * (tunneling / tls.tunneling_plateau) /
                  (1.0 + tunneling / tls.tunneling_plateau)
            : tunneling;
    return 1.0 / (activated + tun_effective + tls.q_floor);
}

double frequency_shift(const TlsModel& tls, double temperature, double omega,
                       double t_ref) {
    tls.validate();
    check_t_omega(temperature, omega);
    if (!(t_ref > 0.0)) throw InvalidInput("reference temperature must be positive");
    const BarrierDistribution dist(tls);
    const double log_wtau0 = std::log(omega * tls.attempt_time);
    const double hi = tls.barrier_mean + 8.0 * tls.barrier_width;
    const auto relaxed_fraction = [&](double t) {
        return adapt_quad(
            [&](double v) {
                return dist(v) * dispersion_factor(log_wtau0 + v / t);
            },
            0.0, hi, 1e-6);
    };
    return -0.5 * tls.activation_strength *
           (relaxed_fraction(temperature) - relaxed_fraction(t_ref));
}

double saturation_displacement(double j_sat, const MaterialData& material,
                               double omega) {
    if (!(j_sat > 0.0)) throw InvalidInput("saturation flux must be positive");
    if (!(omega > 0.0)) throw InvalidInput("angular frequency must be positive");
    if (!(material.density > 0.0) || !(material.sound_speed > 0.0)) {
        throw InvalidInput("material density and sound speed must be positive");
    }
    return std::sqrt(2.0 * j_sat /
                     (material.density * material.sound_speed * omega * omega));
}

double phonon_occupancy(double temperature, double omega) {
    check_t_omega(temperature, omega);
    return constants::boltzmann * temperature / (constants::hbar * omega);
}

double phonon_occupancy_bose(double temperature, double omega) {
    check_t_omega(temperature, omega);
    return 1.0 / std::expm1(constants::hbar * omega /
                            (constants::boltzmann * temperature));
}

double brownian_rms(double temperature, const MechMode& mode) {
    mode.validate();
    if (!(temperature > 0.0)) throw InvalidInput("temperature must be positive");
    const double omega_m = 2.0 * constants::pi * mode.frequency;
    return std::sqrt(constants::boltzmann * temperature /
                     (mode.effective_mass * omega_m * omega_m));
}

std::vector<std::pair<double, double>> displacement_spectrum(
    double temperature, const MechMode& mode,
    const std::vector<double>& frequency_grid_hz) {
    mode.validate();
    if (!(temperature > 0.0)) throw InvalidInput("temperature must be positive");
    if (!mode.quality_factor) {
        throw InvalidInput("displacement spectrum needs the mode quality factor");
    }
    const double q = *mode.quality_factor;
    if (!(q > 0.0)) throw InvalidInput("quality factor must be positive");
    for (double f : frequency_grid_hz) {
        if (!(f > 0.0)) throw InvalidInput("frequency grid must be positive");
    }

    const double omega_m = 2.0 * constants::pi * mode.frequency;
    const double c0 = 4.0 * constants::boltzmann * temperature * omega_m /
                      (mode.effective_mass * q);
    const double gamma = omega_m / q;

    std::vector<double> omega(frequency_grid_hz.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        omega[i] = 2.0 * constants::pi * frequency_grid_hz[i];
    }
    std::vector<double> density(omega.size());
    kernels::active_kernels().lorentzian_spectrum(
        c0, omega_m * omega_m, gamma * gamma, omega.data(), density.data(),
        omega.size());

    std::vector<std::pair<double, double>> out(omega.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        // with the one-sided dW/2pi convention the per-Hz density is
        // S_x(2 pi f) itself: int S df = <x^2>
        out[i] = {frequency_grid_hz[i], density[i]};
    }
    return out;
}

namespace {
constexpr const char* kTlsSchema = "cryocav.tls_model/1";
}

std::string to_json(const TlsModel& tls) {
    tls.validate();
    nlohmann::ordered_json j;
    j["schema"] = kTlsSchema;
    j["provenance"] = tls.provenance;
    j["activation_strength"] = tls.activation_strength;
    j["barrier_mean_kelvin"] = tls.barrier_mean;
    j["barrier_width_kelvin"] = tls.barrier_width;
    j["attempt_time_s"] = tls.attempt_time;
    j["tunneling_strength"] = tls.tunneling_strength;
    j["tunneling_plateau"] = tls.tunneling_plateau;
    j["q_floor"] = tls.q_floor;
    return j.dump(2) + "\n";
}

TlsModel tls_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad TLS JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != kTlsSchema) {
        throw InvalidInput("TLS JSON missing schema '" + std::string(kTlsSchema) +
                           "'");
    }
    TlsModel t;
    try {
        t.activation_strength = j.at("activation_strength").get<double>();
        t.barrier_mean = j.at("barrier_mean_kelvin").get<double>();
        t.barrier_width = j.at("barrier_width_kelvin").get<double>();
        t.attempt_time = j.at("attempt_time_s").get<double>();
        t.tunneling_strength = j.at("tunneling_strength").get<double>();
        t.tunneling_plateau = j.value("tunneling_plateau", 0.0);
        t.q_floor = j.value("q_floor", 0.0);
        t.provenance = j.value("provenance", std::string("user-supplied"));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad TLS JSON: ") + e.what());
    }
    t.validate();
    return t;
}

TlsModel load_tls_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open TLS model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return tls_model_from_json(ss.str());
}

void save_tls_model(const TlsModel& tls, const std::string& path) {
    csv::write_file_atomic(path, to_json(tls));
}

}  // namespace cryocav
