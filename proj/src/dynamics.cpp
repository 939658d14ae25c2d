// Time-domain integration of the coupled field/temperature system and the
// linearized stability oracle.
//
// Time is nondimensionalized by 1/Omega_c inside the integrator. The fast
// field block is strongly damped, so an explicit adaptive scheme with a
// stiffness diagnostic covers the quasi-static sweeps of interest.

#include "cryocav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cryocav/constants.hpp"
#include "cryocav/csv.hpp"
#include "cryocav/errors.hpp"

namespace cryocav {

double transmission(double i_tilde, double coupling) {
    if (!(coupling >= 0.0 && coupling <= 1.0)) {
        throw InvalidInput("coupling must lie in [0, 1]");
    }
    if (!(i_tilde >= 0.0 && i_tilde <= 1.0 + 1e-6)) {
        throw InvalidInput("normalized intensity must lie in [0, 1]");
    }
    return 1.0 - coupling * (2.0 - coupling) * i_tilde;
}

void ThermalKernel::validate() const {
    if (!(chi_stat >= 0.0) || !std::isfinite(chi_stat)) {
        throw InvalidInput("chi_stat must be non-negative");
    }
    if (!(tau_thermal > 0.0)) {
        throw InvalidInput("tau_thermal must be positive");
    }
}

void SweepConfig::validate() const {
    if (!(scan_rate != 0.0) || !std::isfinite(scan_rate)) {
        throw InvalidInput("scan rate must be non-zero");
    }
    if (!(input_power >= 0.0)) {
        throw InvalidInput("input power must be non-negative");
    }
    if (!(base_temperature > 0.0)) {
        throw InvalidInput("base temperature must be positive");
    }
    if (phi_start == phi_end) {
        throw InvalidInput("sweep needs distinct start/end detunings");
    }
    if (n_samples < 2) throw InvalidInput("need at least two sweep samples");
}

FieldState derivative(const FieldState& state, double phi_l,
                      const ThermalKernel& kernel, const CavityParams& params,
                      const ResonanceModel& model, double base_temperature,
                      double input_power) {
    kernel.validate();
    const double omega_c = 2.0 * constants::pi * half_linewidth(params);
    const double p_max = max_circulating_power(input_power, params);
    const double phi =
        phi_l - normalized_shift(params, model,
                                 base_temperature + state.temperature_rise);
    FieldState rate;
    rate.field_re = omega_c * (-state.field_re - phi * state.field_im + 1.0);
    rate.field_im = omega_c * (-state.field_im + phi * state.field_re);
    const double intensity =
        state.field_re * state.field_re + state.field_im * state.field_im;
    rate.temperature_rise =
        (kernel.chi_stat * p_max * intensity - state.temperature_rise) /
        kernel.tau_thermal;
    rate.time = 1.0;
    return rate;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct State3 {
    double x, y, dT;
};

struct SweepSystem {
    const ResonanceModel* model;
    std::vector<double> coeffs;
    double t_min, t_max, inv_hl;
    double heat_gain;        // chi * P_max, K per unit intensity
    double inv_tau_nd;       // 1/(Omega_c tau)
    double t0;
    // phi_l(s): hold at phi_start for s < 0, then linear ramp
    double phi_start, rate_nd;

    double phi_l_at(double s) const {
        return s <= 0.0 ? phi_start : phi_start + rate_nd * s;
    }

    double shift_at(double dT) const {
        const double t = std::clamp(t0 + dT, t_min, t_max);
        double acc = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
            acc = std::fma(acc, t, coeffs[k]);
        }
        return acc * inv_hl;
    }

    State3 rhs(double s, const State3& v) const {
        const double phi = phi_l_at(s) - shift_at(v.dT);
        return {-v.x - phi * v.y + 1.0, -v.y + phi * v.x,
                (heat_gain * (v.x * v.x + v.y * v.y) - v.dT) * inv_tau_nd};
    }
};

State3 axpy(const State3& base, double h, const State3& k) {
    return {base.x + h * k.x, base.y + h * k.y, base.dT + h * k.dT};
}

}  // namespace

std::vector<SweepSample> integrate_sweep(const SweepConfig& config,
                                         const ThermalKernel& kernel,
                                         const CavityParams& params,
                                         const ResonanceModel& model) {
    config.validate();
    kernel.validate();
    params.validate();
    model.validate();

    const double omega_c = 2.0 * constants::pi * half_linewidth(params);
    const double span = config.phi_end - config.phi_start;
    const double rate = std::abs(config.scan_rate) * (span < 0.0 ? -1.0 : 1.0);

    SweepSystem sys;
    sys.model = &model;
    sys.coeffs = model.coefficients;
    sys.t_min = model.t_min;
    sys.t_max = model.t_max;
    sys.inv_hl = 1.0 / half_linewidth(params);
    sys.heat_gain =
        kernel.chi_stat * max_circulating_power(config.input_power, params);
    sys.inv_tau_nd = 1.0 / (omega_c * kernel.tau_thermal);
    sys.t0 = config.base_temperature;
    sys.phi_start = config.phi_start;
    sys.rate_nd = rate / omega_c;

    const double s_settle = config.settle_factor * omega_c * kernel.tau_thermal;
    const double s_end = span / sys.rate_nd;

    // sample boundaries (nondimensional time), uniform in phi_l
    std::vector<double> s_samples(config.n_samples);
    for (std::size_t k = 0; k < config.n_samples; ++k) {
        s_samples[k] = s_end * static_cast<double>(k) /
                       static_cast<double>(config.n_samples - 1);
    }

    std::vector<SweepSample> out;
    out.reserve(config.n_samples);

    State3 v{0.0, 0.0, 0.0};  // empty cavity
    double s = -s_settle;
    double h = 1e-3;
    const double rtol = config.rel_tol;
    const double atol = 1e-12;
    std::size_t next_sample = 0;
    State3 k1 = sys.rhs(s, v);
    bool have_k1 = true;

    const auto record = [&](double s_at, const State3& st) {
        const double intensity = st.x * st.x + st.y * st.y;
        SweepSample sample;
        sample.time = s_at / omega_c;
        sample.phi_l = sys.phi_l_at(s_at);
        sample.i_tilde = intensity;
        sample.temperature_rise = st.dT;
        sample.transmission =
            1.0 - params.coupling * (2.0 - params.coupling) *
                      std::min(intensity, 1.0);
        out.push_back(sample);
    };

    while (next_sample < s_samples.size()) {
        const double s_target = s_samples[next_sample];
        bool clipped = false;
        double h_try = h;
        if (s + h_try >= s_target) {
            h_try = s_target - s;
            clipped = true;
        }
        if (h_try < 1e-6 && !clipped) {
            std::ostringstream os;
            os << "integrator step collapsed to " << h_try
               << "/Omega_c at s = " << s << " (phi_l = " << sys.phi_l_at(s)
               << "); the system is too stiff for the explicit scheme";
            throw StiffnessError(os.str());
        }

        if (!have_k1) {
            k1 = sys.rhs(s, v);
            have_k1 = true;
        }
        const State3 k2 = sys.rhs(s + kA21 * h_try, axpy(v, h_try * kA21, k1));
        State3 tmp = v;
        tmp = axpy(tmp, h_try * kA31, k1);
        tmp = axpy(tmp, h_try * kA32, k2);
        const State3 k3 = sys.rhs(s + 0.3 * h_try, tmp);
        tmp = axpy(axpy(axpy(v, h_try * kA41, k1), h_try * kA42, k2),
                   h_try * kA43, k3);
        const State3 k4 = sys.rhs(s + 0.8 * h_try, tmp);
        tmp = axpy(axpy(axpy(axpy(v, h_try * kA51, k1), h_try * kA52, k2),
                        h_try * kA53, k3),
                   h_try * kA54, k4);
        const State3 k5 = sys.rhs(s + 8.0 / 9.0 * h_try, tmp);
        tmp = axpy(axpy(axpy(axpy(axpy(v, h_try * kA61, k1), h_try * kA62, k2),
                             h_try * kA63, k3),
                        h_try * kA64, k4),
                   h_try * kA65, k5);
        const State3 k6 = sys.rhs(s + h_try, tmp);
        State3 v5 = v;
        v5 = axpy(v5, h_try * kB1, k1);
        v5 = axpy(v5, h_try * kB3, k3);
        v5 = axpy(v5, h_try * kB4, k4);
        v5 = axpy(v5, h_try * kB5, k5);
        v5 = axpy(v5, h_try * kB6, k6);
        const State3 k7 = sys.rhs(s + h_try, v5);

        const double ex = h_try * (kE1 * k1.x + kE3 * k3.x + kE4 * k4.x +
                                   kE5 * k5.x + kE6 * k6.x + kE7 * k7.x);
        const double ey = h_try * (kE1 * k1.y + kE3 * k3.y + kE4 * k4.y +
                                   kE5 * k5.y + kE6 * k6.y + kE7 * k7.y);
        const double et = h_try * (kE1 * k1.dT + kE3 * k3.dT + kE4 * k4.dT +
                                   kE5 * k5.dT + kE6 * k6.dT + kE7 * k7.dT);
        const double sx = atol + rtol * std::max(std::abs(v.x), std::abs(v5.x));
        const double sy = atol + rtol * std::max(std::abs(v.y), std::abs(v5.y));
        const double st = atol + rtol * std::max(std::abs(v.dT), std::abs(v5.dT));
        const double err = std::sqrt(((ex / sx) * (ex / sx) +
                                      (ey / sy) * (ey / sy) +
                                      (et / st) * (et / st)) / 3.0);

        if (err <= 1.0) {
            s += h_try;
            v = v5;
            k1 = k7;  // FSAL
            have_k1 = true;
            if (clipped && s >= s_target) {
                record(s_target, v);
                ++next_sample;
            }
        } else {
            have_k1 = true;  // k1 still valid at unchanged (s, v)
        }
        const double grow =
            err > 0.0 ? 0.9 * std::pow(err, -0.2)
                      : 5.0;
        const double h_new = h_try * std::clamp(grow, 0.2, 5.0);
        if (!clipped || err > 1.0) {
            h = h_new;
        } else {
            h = std::max(h, h_new);
        }
        h = std::min(h, std::max(std::abs(s_end) * 1.01, 1.0));
        if (h < 1e-6) {
            std::ostringstream os;
            os << "integrator step collapsed to " << h << "/Omega_c at s = "
               << s << " (phi_l = " << sys.phi_l_at(s) << ")";
            throw StiffnessError(os.str());
        }
    }
    return out;
}

FieldState evolve_fixed_detuning(const FieldState& initial, double phi_l,
                                 double duration, const ThermalKernel& kernel,
                                 const CavityParams& params,
                                 const ResonanceModel& model,
                                 double base_temperature, double input_power,
                                 double rel_tol) {
    kernel.validate();
    params.validate();
    if (!(duration >= 0.0)) throw InvalidInput("duration must be non-negative");

    const double omega_c = 2.0 * constants::pi * half_linewidth(params);
    SweepSystem sys;
    sys.model = &model;
    sys.coeffs = model.coefficients;
    sys.t_min = model.t_min;
    sys.t_max = model.t_max;
    sys.inv_hl = 1.0 / half_linewidth(params);
    sys.heat_gain = kernel.chi_stat * max_circulating_power(input_power, params);
    sys.inv_tau_nd = 1.0 / (omega_c * kernel.tau_thermal);
    sys.t0 = base_temperature;
    sys.phi_start = phi_l;
    sys.rate_nd = 0.0;

    State3 v{initial.field_re, initial.field_im, initial.temperature_rise};
    const double s_end = duration * omega_c;
    double s = 0.0;
    double h = 1e-3;
    const double atol = 1e-12;
    State3 k1 = sys.rhs(s, v);
    while (s < s_end) {
        double h_try = std::min(h, s_end - s);
        const State3 k2 = sys.rhs(s, axpy(v, h_try * kA21, k1));
        State3 tmp = axpy(axpy(v, h_try * kA31, k1), h_try * kA32, k2);
        const State3 k3 = sys.rhs(s, tmp);
        tmp = axpy(axpy(axpy(v, h_try * kA41, k1), h_try * kA42, k2),
                   h_try * kA43, k3);
        const State3 k4 = sys.rhs(s, tmp);
        tmp = axpy(axpy(axpy(axpy(v, h_try * kA51, k1), h_try * kA52, k2),
                        h_try * kA53, k3),
                   h_try * kA54, k4);
        const State3 k5 = sys.rhs(s, tmp);
        tmp = axpy(axpy(axpy(axpy(axpy(v, h_try * kA61, k1), h_try * kA62, k2),
                             h_try * kA63, k3),
                        h_try * kA64, k4),
                   h_try * kA65, k5);
        const State3 k6 = sys.rhs(s, tmp);
        State3 v5 = axpy(v, h_try * kB1, k1);
        v5 = axpy(v5, h_try * kB3, k3);
        v5 = axpy(v5, h_try * kB4, k4);
        v5 = axpy(v5, h_try * kB5, k5);
        v5 = axpy(v5, h_try * kB6, k6);
        const State3 k7 = sys.rhs(s, v5);
        const double ex = h_try * (kE1 * k1.x + kE3 * k3.x + kE4 * k4.x +
                                   kE5 * k5.x + kE6 * k6.x + kE7 * k7.x);
        const double ey = h_try * (kE1 * k1.y + kE3 * k3.y + kE4 * k4.y +
                                   kE5 * k5.y + kE6 * k6.y + kE7 * k7.y);
        const double et = h_try * (kE1 * k1.dT + kE3 * k3.dT + kE4 * k4.dT +
                                   kE5 * k5.dT + kE6 * k6.dT + kE7 * k7.dT);
        const double sx = atol + rel_tol * std::max(std::abs(v.x), std::abs(v5.x));
        const double sy = atol + rel_tol * std::max(std::abs(v.y), std::abs(v5.y));
        const double st = atol + rel_tol * std::max(std::abs(v.dT), std::abs(v5.dT));
        const double err = std::sqrt(((ex / sx) * (ex / sx) +
                                      (ey / sy) * (ey / sy) +
                                      (et / st) * (et / st)) / 3.0);
        if (err <= 1.0) {
            s += h_try;
            v = v5;
            k1 = k7;
        }
        h = h_try * std::clamp(err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0,
                               0.2, 5.0);
        if (h < 1e-6) {
            throw StiffnessError("fixed-detuning relaxation step collapsed");
        }
    }
    FieldState out;
    out.field_re = v.x;
    out.field_im = v.y;
    out.temperature_rise = v.dT;
    out.time = initial.time + duration;
    return out;
}

namespace {

// roots of l^3 + c2 l^2 + c1 l + c0; returns the largest real part
double cubic_max_real_part(double c2, double c1, double c0) {
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const double shift = -c2 / 3.0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double r = std::sqrt(disc);
        const double t1 = std::cbrt(-0.5 * q + r) + std::cbrt(-0.5 * q - r);
        const double real_root = t1 + shift;
        const double pair_real = -0.5 * t1 + shift;
        return std::max(real_root, pair_real);
    }
    // three real roots
    const double m = 2.0 * std::sqrt(std::max(-p / 3.0, 0.0));
    if (m == 0.0) return shift;
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const double root =
            m * std::cos(theta - 2.0 * constants::pi * k / 3.0) + shift;
        best = std::max(best, root);
    }
    return best;
}

}  // namespace

double leading_eigenvalue(const BranchPoint& point, const ThermalKernel& kernel,
                          const CavityParams& params, const ResonanceModel& model,
                          double base_temperature, double input_power) {
    kernel.validate();
    const double omega_c = 2.0 * constants::pi * half_linewidth(params);
    const double p_max = max_circulating_power(input_power, params);
    const double temp = base_temperature + point.temperature_rise;
    const double phi = point.detuning - normalized_shift(params, model, temp);
    const double shift_slope =
        resonance_slope(model, temp) / half_linewidth(params);
    // steady field from the linear cavity response at this detuning
    const double denom = 1.0 + phi * phi;
    const double x = 1.0 / denom;
    const double y = phi / denom;
    const double g = kernel.chi_stat * p_max / (omega_c * kernel.tau_thermal);
    const double inv_tau = 1.0 / (omega_c * kernel.tau_thermal);

    // J = [ -1   -phi   y*S ]
    //     [ phi  -1    -x*S ]
    //     [ 2gx  2gy   -1/t ]   (nondimensional, S = d shift/dT)
    const double a13 = y * shift_slope, a23 = -x * shift_slope;
    const double tr = -2.0 - inv_tau;
    const double m12 = (-1.0) * (-1.0) - (-phi) * phi;          // xy minor
    const double m13 = (-1.0) * (-inv_tau) - a13 * (2.0 * g * x);
    const double m23 = (-1.0) * (-inv_tau) - a23 * (2.0 * g * y);
    const double sum_minors = m12 + m13 + m23;
    const double det =
        -1.0 * ((-1.0) * (-inv_tau) - a23 * 2.0 * g * y) -
        (-phi) * (phi * (-inv_tau) - a23 * 2.0 * g * x) +
        a13 * (phi * 2.0 * g * y - (-1.0) * 2.0 * g * x);
    return cubic_max_real_part(-tr, sum_minors, -det);
}

Stability linear_stability(const BranchPoint& point, const ThermalKernel& kernel,
                           const CavityParams& params, const ResonanceModel& model,
                           double base_temperature, double input_power) {
    const double lead =
        leading_eigenvalue(point, kernel, params, model, base_temperature,
                           input_power);
    constexpr double tol = 1e-9;  // units of Omega_c
    if (std::abs(lead) < tol) return Stability::marginal;
    return lead < 0.0 ? Stability::stable : Stability::unstable;
}

std::string sweep_csv(const std::vector<SweepSample>& samples,
                      const std::vector<std::string>& header_comments) {
    std::string out;
    for (const auto& c : header_comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    out += "time_s,phi_l,i_tilde,delta_t_kelvin,transmission\n";
    for (const auto& s : samples) {
        out += csv::format_double(s.time);
        out += ',';
        out += csv::format_double(s.phi_l);
        out += ',';
        out += csv::format_double(s.i_tilde);
        out += ',';
        out += csv::format_double(s.temperature_rise);
        out += ',';
        out += csv::format_double(s.transmission);
        out += '\n';
    }
    return out;
}

}  // namespace cryocav
