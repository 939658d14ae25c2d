// Steady-state structure of the thermally shifted cavity response.
//
// The static working-point equation 1 + (phi_l - shift(T0+mu I))^2 = 1/I is
// multivalued in phi_l but single-valued in intensity: each sign branch
// phi^±(I) = shift ± sqrt(1/I - 1) is an explicit curve. Turning points are
// zeros of the analytic derivative along those curves, and the regime
// taxonomy follows from how the fold windows of the two branches overlap.

#include "cryocav/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "cryocav/csv.hpp"
#include "cryocav/dynamics.hpp"
#include "cryocav/errors.hpp"
#include "cryocav/kernels.hpp"

namespace cryocav {

namespace {

constexpr double kDegeneracyTol = 1e-6;   // half-linewidths

struct ShiftEval {
    const ResonanceModel* model;
    std::vector<double> slope_coeffs;
    double inv_hl = 0.0;
    double t0 = 0.0;
    double mu = 0.0;

    ShiftEval(const ResonanceModel& m, const CavityParams& p, double mu_,
              double t0_)
        : model(&m), t0(t0_), mu(mu_) {
        m.validate();
        inv_hl = 1.0 / half_linewidth(p);
        for (std::size_t k = 1; k < m.coefficients.size(); ++k) {
            slope_coeffs.push_back(m.coefficients[k] * static_cast<double>(k));
        }
        if (slope_coeffs.empty()) slope_coeffs.push_back(0.0);
    }

    // Phi(T0 + mu I) in half-linewidth units, clamped like eval_resonance.
    double shift(double intensity) const {
        const double t = std::clamp(std::fma(mu, intensity, t0), model->t_min,
                                    model->t_max);
        double acc = model->coefficients.back();
        for (std::size_t k = model->coefficients.size() - 1; k-- > 0;) {
            acc = std::fma(acc, t, model->coefficients[k]);
        }
        return acc * inv_hl;
    }

    // d Phi / dI; the clamped evaluation is flat outside the model window.
    double shift_slope(double intensity) const {
        const double t = std::fma(mu, intensity, t0);
        if (t < model->t_min || t > model->t_max) return 0.0;
        double acc = slope_coeffs.back();
        for (std::size_t k = slope_coeffs.size() - 1; k-- > 0;) {
            acc = std::fma(acc, t, slope_coeffs[k]);
        }
        return mu * acc * inv_hl;
    }

    // dphi^±/dI = mu Phi' ∓ 1/(2 I^2 sqrt(1/I - 1)); -inf/+inf at I = 1.
    double branch_slope(double intensity, SignBranch sign) const {
        const double w2 = std::max(1.0 / intensity - 1.0, 0.0);
        const double wing_term =
            (w2 > 0.0) ? 1.0 / (2.0 * intensity * intensity * std::sqrt(w2))
                       : std::numeric_limits<double>::infinity();
        const double s = shift_slope(intensity);
        return sign == SignBranch::plus ? s - wing_term : s + wing_term;
    }

    double phi_of(double intensity, SignBranch sign) const {
        const double wing = std::sqrt(std::max(1.0 / intensity - 1.0, 0.0));
        return sign == SignBranch::plus ? shift(intensity) + wing
                                        : shift(intensity) - wing;
    }
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Bisect branch_slope over [lo, hi] (sign change guaranteed by caller).
double refine_turning(const ShiftEval& ctx, SignBranch sign, double lo,
                      double hi) {
    double flo = ctx.branch_slope(lo, sign);
    for (int it = 0; it < 100 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ctx.branch_slope(mid, sign);
        if (sign_of(fm) == sign_of(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<TurningPoint> locate_turning_points(
    const ShiftEval& ctx, const std::vector<double>& grid) {
    std::vector<TurningPoint> out;
    for (SignBranch sign : {SignBranch::plus, SignBranch::minus}) {
        double prev_i = grid.front();
        double prev_f = ctx.branch_slope(prev_i, sign);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const double cur_i = grid[k];
            const double cur_f = ctx.branch_slope(cur_i, sign);
            if (sign_of(cur_f) != sign_of(prev_f)) {
                const double root = refine_turning(ctx, sign, prev_i, cur_i);
                out.push_back({ctx.phi_of(root, sign), root, sign});
            } else if (std::isfinite(prev_f) && std::isfinite(cur_f)) {
                // a double sign change inside the cell would be invisible to
                // the endpoints; a midpoint probe catches it
                const double mid_f =
                    ctx.branch_slope(0.5 * (prev_i + cur_i), sign);
                if (sign_of(mid_f) != 0 && sign_of(mid_f) != sign_of(prev_f)) {
                    std::ostringstream os;
                    os << "intensity grid too coarse near I = "
                       << 0.5 * (prev_i + cur_i) << " ("
                       << (sign == SignBranch::plus ? "+" : "-") << " branch)";
                    throw GridTooCoarseError(os.str());
                }
            }
            prev_i = cur_i;
            prev_f = cur_f;
        }
    }
    std::sort(out.begin(), out.end(), [](const TurningPoint& a,
                                         const TurningPoint& b) {
        return a.detuning < b.detuning;
    });
    return out;
}

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 8) throw InvalidInput("intensity grid too short");
    double prev = 0.0;
    for (double v : grid) {
        if (!(v > 0.0 && v <= 1.0)) {
            throw InvalidInput("intensity grid values must lie in (0, 1]");
        }
        if (!(v > prev)) {
            throw InvalidInput("intensity grid must be strictly increasing");
        }
        prev = v;
    }
}

}  // namespace

const char* regime_code(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::Monostable: return "i";
        case RegimeLabel::RedSideBistable: return "ii";
        case RegimeLabel::BlueSideBistable: return "iii";
        case RegimeLabel::TristableA: return "iv";
        case RegimeLabel::TristableB: return "v";
        case RegimeLabel::DoubleBistable: return "vi";
    }
    return "?";
}

std::vector<double> default_intensity_grid(std::size_t n) {
    if (n < 8) throw InvalidInput("intensity grid too short");
    std::vector<double> grid(n);
    const double lo = std::log(1e-4);
    const double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(n - 1));
    }
    grid.back() = 1.0;  // exact closure point where both sign branches meet
    return grid;
}

BranchSet branch_curve(const ResonanceModel& model, const CavityParams& params,
                       double mu, double base_temperature,
                       const std::vector<double>& grid) {
    model.validate();
    params.validate();
    check_grid(grid);
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw InvalidInput("mu must be non-negative");
    }
    if (!(base_temperature > 0.0)) {
        throw InvalidInput("base temperature must be positive");
    }

    const std::size_t n = grid.size();
    std::vector<double> phi_plus(n), phi_minus(n);
    const auto& kb = kernels::active_kernels();
    kb.branch_assemble(model.coefficients.data(),
                       static_cast<int>(model.coefficients.size()), model.t_min,
                       model.t_max, base_temperature, mu,
                       1.0 / half_linewidth(params), grid.data(),
                       phi_plus.data(), phi_minus.data(), n);

    BranchSet branch;
    branch.mu = mu;
    branch.base_temperature = base_temperature;
    branch.model = model;
    branch.params = params;
    branch.upper_sign_branch.resize(n);
    branch.lower_sign_branch.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        branch.upper_sign_branch[i] = {grid[i], phi_plus[i], mu * grid[i], false};
        branch.lower_sign_branch[i] = {grid[i], phi_minus[i], mu * grid[i], false};
    }

    const ShiftEval ctx(model, params, mu, base_temperature);
    branch.turning_points = locate_turning_points(ctx, grid);
    return branch;
}

std::vector<TurningPoint> turning_points(const BranchSet& branch) {
    std::vector<double> grid;
    grid.reserve(branch.upper_sign_branch.size());
    for (const auto& p : branch.upper_sign_branch) grid.push_back(p.intensity);
    const ShiftEval ctx(branch.model, branch.params, branch.mu,
                        branch.base_temperature);
    return locate_turning_points(ctx, grid);
}

std::vector<BranchPoint> steady_states(const ResonanceModel& model,
                                       const CavityParams& params, double mu,
                                       double base_temperature, double phi_l,
                                       std::size_t scan_cells) {
    model.validate();
    params.validate();
    if (!std::isfinite(phi_l)) throw InvalidInput("detuning must be finite");
    if (!(mu >= 0.0)) throw InvalidInput("mu must be non-negative");
    if (scan_cells < 100) throw InvalidInput("scan grid too coarse");

    const ShiftEval ctx(model, params, mu, base_temperature);
    const auto g = [&](double intensity) {
        const double u = phi_l - ctx.shift(intensity);
        return (1.0 / intensity - 1.0) - u * u;
    };

    // every root obeys I >= 1/(1 + max (phi - shift)^2) over the reachable
    // shift range; start the scan safely below that bound
    const double s_lo = ctx.shift(1e-12), s_hi = ctx.shift(1.0);
    double wmax = std::max(std::abs(phi_l - s_lo), std::abs(phi_l - s_hi));
    // shift is monotone in T only for monotone models; pad with the extremes
    // over a coarse probe to stay conservative
    for (int k = 1; k < 64; ++k) {
        const double s = ctx.shift(k / 64.0);
        wmax = std::max(wmax, std::abs(phi_l - s));
    }
    const double i_lo =
        std::min(0.5 / (1.0 + (wmax + 1.0) * (wmax + 1.0)), 1e-4);

    std::vector<BranchPoint> roots;
    const double log_lo = std::log(i_lo);
    double prev_i = i_lo;
    double prev_g = g(prev_i);
    for (std::size_t k = 1; k <= scan_cells; ++k) {
        double cur_i = std::exp(log_lo + (0.0 - log_lo) * static_cast<double>(k) /
                                             static_cast<double>(scan_cells));
        if (k == scan_cells) cur_i = 1.0;
        const double cur_g = g(cur_i);
        if (sign_of(cur_g) != sign_of(prev_g)) {
            double lo = prev_i, hi = cur_i, flo = prev_g;
            for (int it = 0; it < 100 && (hi - lo) > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = g(mid);
                if (sign_of(fm) == sign_of(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            const double temp =
                std::fma(mu, root, base_temperature);
            const double u = phi_l - ctx.shift(root);
            const double slope_gain =
                2.0 * u * ctx.shift_slope(root) * root * root;
            // adiabatic thermal criterion; shift_slope already carries mu
            const bool stable = slope_gain < 1.0;
            roots.push_back({root, phi_l, temp - base_temperature, stable});
        }
        prev_i = cur_i;
        prev_g = cur_g;
    }
    return roots;
}

BranchSet classify_stability(BranchSet branch) {
    // curve order: up the + branch in intensity, across the closure at I=1,
    // back down the - branch; stability alternates at each turning point and
    // the low-intensity tails are stable
    const auto curve_pos = [](SignBranch sign, double intensity) {
        return sign == SignBranch::plus ? intensity : 2.0 - intensity;
    };
    std::vector<double> tp_pos;
    for (const auto& tp : branch.turning_points) {
        tp_pos.push_back(curve_pos(tp.branch, tp.intensity));
    }
    std::sort(tp_pos.begin(), tp_pos.end());

    const auto segment_of = [&](double pos) {
        return static_cast<std::size_t>(
            std::upper_bound(tp_pos.begin(), tp_pos.end(), pos) -
            tp_pos.begin());
    };
    for (auto& p : branch.upper_sign_branch) {
        p.stable = segment_of(curve_pos(SignBranch::plus, p.intensity)) % 2 == 0;
    }
    for (auto& p : branch.lower_sign_branch) {
        p.stable = segment_of(curve_pos(SignBranch::minus, p.intensity)) % 2 == 0;
    }
    branch.stability_classified = true;
    return branch;
}

RegimeLabel classify_regime(const BranchSet& branch,
                            const ResonanceModel& model,
                            double base_temperature) {
    const auto& tps = branch.turning_points;
    for (std::size_t a = 0; a < tps.size(); ++a) {
        for (std::size_t b = a + 1; b < tps.size(); ++b) {
            if (std::abs(tps[a].detuning - tps[b].detuning) < kDegeneracyTol) {
                throw DegenerateError(
                    "coincident turning points within 1e-6 half-linewidths");
            }
        }
    }
    if (tps.empty()) return RegimeLabel::Monostable;

    if (tps.size() == 2) {
        const double i_peak = std::max(tps[0].intensity, tps[1].intensity);
        const double t_peak = base_temperature + branch.mu * i_peak;
        const double slope = resonance_slope(model, t_peak);
        // heating above the inversion temperature pulls the resonance to
        // lower frequency: red side
        return slope < 0.0 ? RegimeLabel::RedSideBistable
                           : RegimeLabel::BlueSideBistable;
    }

    if (tps.size() == 4) {
        std::vector<double> blue, red;
        for (const auto& tp : tps) {
            (tp.branch == SignBranch::plus ? blue : red).push_back(tp.detuning);
        }
        if (blue.size() != 2 || red.size() != 2) {
            throw DegenerateError(
                "non-canonical turning-point structure (folds not split 2+2 "
                "across sign branches)");
        }
        std::sort(blue.begin(), blue.end());
        std::sort(red.begin(), red.end());
        const bool disjoint = red.back() < blue.front() || blue.back() < red.front();
        if (disjoint) return RegimeLabel::DoubleBistable;
        // overlap: tristable; sub-split by whether the upper-branch fold sits
        // above or below the blue-side lower fold
        return red.front() >= blue.front() ? RegimeLabel::TristableA
                                           : RegimeLabel::TristableB;
    }

    throw DegenerateError("non-canonical turning-point count " +
                          std::to_string(tps.size()));
}

RegimeMap regime_map(const ResonanceModel& model,
                     const CavityParams& params_template,
                     double base_temperature,
                     const std::vector<double>& finesse_grid,
                     const std::vector<double>& power_grid, double chi_stat,
                     std::size_t grid_points, std::size_t workers) {
    model.validate();
    if (finesse_grid.empty() || power_grid.empty()) {
        throw InvalidInput("regime map grids must be non-empty");
    }
    for (std::size_t i = 0; i + 1 < finesse_grid.size(); ++i) {
        if (!(finesse_grid[i] < finesse_grid[i + 1])) {
            throw InvalidInput("finesse grid must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i + 1 < power_grid.size(); ++i) {
        if (!(power_grid[i] < power_grid[i + 1])) {
            throw InvalidInput("power grid must be strictly increasing");
        }
    }
    if (!(finesse_grid.front() > 0.0) || !(power_grid.front() >= 0.0)) {
        throw InvalidInput("regime map grids must be positive");
    }

    RegimeMap map;
    map.finesse = finesse_grid;
    map.power = power_grid;
    map.cell.assign(finesse_grid.size() * power_grid.size(), '?');

    const auto igrid = default_intensity_grid(grid_points);
    const std::size_t n_cells = map.cell.size();
    std::size_t n_workers = workers == 0
                                ? std::max(1u, std::thread::hardware_concurrency())
                                : workers;
    n_workers = std::min<std::size_t>(n_workers, n_cells);

    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    const auto work = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t idx = begin; idx < end; ++idx) {
                const double finesse = finesse_grid[idx / power_grid.size()];
                const double power = power_grid[idx % power_grid.size()];
                CavityParams p = params_template;
                p.finesse = finesse;
                const double mu = mu_parameter(power, p, chi_stat);
                char code = '?';
                try {
                    const BranchSet branch =
                        branch_curve(model, p, mu, base_temperature, igrid);
                    switch (classify_regime(branch, model, base_temperature)) {
                        case RegimeLabel::Monostable: code = '1'; break;
                        case RegimeLabel::RedSideBistable: code = '2'; break;
                        case RegimeLabel::BlueSideBistable: code = '3'; break;
                        case RegimeLabel::TristableA: code = '4'; break;
                        case RegimeLabel::TristableB: code = '5'; break;
                        case RegimeLabel::DoubleBistable: code = '6'; break;
                    }
                } catch (const DegenerateError&) {
                    code = 'X';
                }
                map.cell[idx] = code;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (n_workers <= 1) {
        work(0, n_cells);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_cells + n_workers - 1) / n_workers;
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(begin + chunk, n_cells);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return map;
}

namespace {

// roots of phi^sign(I) = phi on the tabulated curve, polished by bisection
struct CurveRoot {
    double intensity;
    SignBranch sign;
    std::size_t segment;
    bool stable;
};

std::vector<CurveRoot> roots_at(const BranchSet& branch, const ShiftEval& ctx,
                                const std::vector<double>& tp_pos, double phi) {
    const auto curve_pos = [](SignBranch sign, double intensity) {
        return sign == SignBranch::plus ? intensity : 2.0 - intensity;
    };
    std::vector<CurveRoot> roots;
    for (SignBranch sign : {SignBranch::plus, SignBranch::minus}) {
        const auto& pts = sign == SignBranch::plus ? branch.upper_sign_branch
                                                   : branch.lower_sign_branch;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const double f0 = pts[k - 1].detuning - phi;
            const double f1 = pts[k].detuning - phi;
            if (sign_of(f0) == sign_of(f1)) continue;
            double lo = pts[k - 1].intensity, hi = pts[k].intensity;
            double flo = f0;
            for (int it = 0; it < 80 && (hi - lo) > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = ctx.phi_of(mid, sign) - phi;
                if (sign_of(fm) == sign_of(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            const double pos = curve_pos(sign, root);
            const std::size_t segment = static_cast<std::size_t>(
                std::upper_bound(tp_pos.begin(), tp_pos.end(), pos) -
                tp_pos.begin());
            roots.push_back({root, sign, segment, segment % 2 == 0});
        }
    }
    return roots;
}

}  // namespace

std::vector<TracePoint> hysteresis_trace(const BranchSet& branch,
                                         SweepDirection direction,
                                         double coupling,
                                         std::size_t n_samples) {
    if (!branch.stability_classified) {
        throw InvalidInput("hysteresis_trace requires classified stability");
    }
    if (n_samples < 2) throw InvalidInput("need at least two sweep samples");

    double phi_lo = std::numeric_limits<double>::infinity();
    double phi_hi = -phi_lo;
    for (const auto& p : branch.upper_sign_branch) {
        phi_lo = std::min(phi_lo, p.detuning);
        phi_hi = std::max(phi_hi, p.detuning);
    }
    for (const auto& p : branch.lower_sign_branch) {
        phi_lo = std::min(phi_lo, p.detuning);
        phi_hi = std::max(phi_hi, p.detuning);
    }

    const ShiftEval ctx(branch.model, branch.params, branch.mu,
                        branch.base_temperature);
    std::vector<double> tp_pos;
    for (const auto& tp : branch.turning_points) {
        tp_pos.push_back(tp.branch == SignBranch::plus ? tp.intensity
                                                       : 2.0 - tp.intensity);
    }
    std::sort(tp_pos.begin(), tp_pos.end());

    std::vector<TracePoint> trace;
    trace.reserve(n_samples);
    bool have_current = false;
    CurveRoot current{};
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n_samples - 1);
        const double phi = direction == SweepDirection::up
                               ? phi_lo + f * (phi_hi - phi_lo)
                               : phi_hi - f * (phi_hi - phi_lo);
        auto roots = roots_at(branch, ctx, tp_pos, phi);
        if (roots.empty()) continue;  // outside the tabulated curve span

        const CurveRoot* next = nullptr;
        if (have_current) {
            for (const auto& r : roots) {
                if (r.sign == current.sign && r.segment == current.segment) {
                    if (next == nullptr ||
                        std::abs(r.intensity - current.intensity) <
                            std::abs(next->intensity - current.intensity)) {
                        next = &r;
                    }
                }
            }
        }
        if (next == nullptr) {
            // segment ended (fold) or first sample: relax to the nearest
            // stable attractor, ties toward lower intensity
            const double from = have_current ? current.intensity
                                             : std::numeric_limits<double>::max();
            for (const auto& r : roots) {
                if (!r.stable) continue;
                if (next == nullptr) {
                    next = &r;
                    continue;
                }
                const double da = std::abs(r.intensity - from);
                const double db = std::abs(next->intensity - from);
                if (da < db || (da == db && r.intensity < next->intensity)) {
                    next = &r;
                }
            }
        }
        if (next == nullptr) continue;  // no stable root tabulated here
        current = *next;
        have_current = true;
        trace.push_back({phi, transmission(current.intensity, coupling),
                         current.intensity});
    }
    return trace;
}

std::string branch_set_csv(const BranchSet& branch) {
    std::string out = "i_tilde,phi_l,delta_t_kelvin,stable,sign_branch\n";
    const auto emit = [&](const std::vector<BranchPoint>& pts, char sign) {
        for (const auto& p : pts) {
            out += csv::format_double(p.intensity);
            out += ',';
            out += csv::format_double(p.detuning);
            out += ',';
            out += csv::format_double(p.temperature_rise);
            out += ',';
            out += p.stable ? '1' : '0';
            out += ',';
            out += sign;
            out += '\n';
        }
    };
    emit(branch.upper_sign_branch, '+');
    emit(branch.lower_sign_branch, '-');
    return out;
}

std::string regime_map_csv(const RegimeMap& map) {
    std::string out = "finesse\\power_W";
    for (double p : map.power) {
        out += ',';
        out += csv::format_double(p);
    }
    out += '\n';
    for (std::size_t fi = 0; fi < map.finesse.size(); ++fi) {
        out += csv::format_double(map.finesse[fi]);
        for (std::size_t pi = 0; pi < map.power.size(); ++pi) {
            out += ',';
            switch (map.at(fi, pi)) {
                case '1': out += "i"; break;
                case '2': out += "ii"; break;
                case '3': out += "iii"; break;
                case '4': out += "iv"; break;
                case '5': out += "v"; break;
                case '6': out += "vi"; break;
                default: out += "X"; break;
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace cryocav
