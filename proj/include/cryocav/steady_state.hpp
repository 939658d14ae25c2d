#pragma once

#include <cstddef>
#include <vector>

#include "cryocav/cavity.hpp"
#include "cryocav/resonance.hpp"

namespace cryocav {

// One steady-state solution of 1 + (phi_l - shift(T0 + mu*I))^2 = 1/I.
struct BranchPoint {
    double intensity = 0.0;          // normalized intracavity intensity, (0,1]
    double detuning = 0.0;           // phi_l, half-linewidth units
    double temperature_rise = 0.0;   // mu * intensity, K
    bool stable = false;
};

enum class SignBranch { plus, minus };

struct TurningPoint {
    double detuning = 0.0;
    double intensity = 0.0;
    SignBranch branch = SignBranch::plus;
};

// The multivalued steady-state response, parametrized by intensity.  The two
// sign branches phi^±(I) = shift(T0+mu I) ± sqrt(1/I - 1) are single-valued
// curves; together they trace the full S structure and meet at I = 1.
struct BranchSet {
    std::vector<BranchPoint> upper_sign_branch;   // phi^+, ascending intensity
    std::vector<BranchPoint> lower_sign_branch;   // phi^-, ascending intensity
    std::vector<TurningPoint> turning_points;     // sorted by detuning
    double mu = 0.0;                              // K
    double base_temperature = 0.0;                // T0, K
    bool stability_classified = false;

    // solver context, kept so downstream operations need no extra arguments
    ResonanceModel model;
    CavityParams params;
};

enum class RegimeLabel {
    Monostable,        // i
    RedSideBistable,   // ii
    BlueSideBistable,  // iii
    TristableA,        // iv
    TristableB,        // v
    DoubleBistable,    // vi
};

const char* regime_code(RegimeLabel label);   // "i".."vi"

// Default intensity grid: log-spaced points in [1e-4, 1], endpoint exactly 1.
std::vector<double> default_intensity_grid(std::size_t n = 4000);

// Evaluate both sign branches over `grid` (strictly increasing, in (0,1]).
// Turning points are located from the analytic derivative
//   dphi^±/dI = mu * shift'(T0+mu I) ∓ 1/(2 I^2 sqrt(1/I - 1))
// with bisection refinement; throws GridTooCoarseError when a grid cell hides
// a double sign change of the derivative.
BranchSet branch_curve(const ResonanceModel& model, const CavityParams& params,
                       double mu, double base_temperature,
                       const std::vector<double>& grid);

// All roots I in (0,1] of the static equation at fixed detuning, located by a
// dense sign-change scan of g(I) = 1/I - 1 - (phi_l - shift)^2 plus bisection
// to |dI| < 1e-12.  Stability from the adiabatic thermal criterion
// 2 mu u shift' I^2 < 1 (u = phi_l - shift), which matches the dynamical
// linearization away from turning points.
std::vector<BranchPoint> steady_states(const ResonanceModel& model,
                                       const CavityParams& params, double mu,
                                       double base_temperature, double phi_l,
                                       std::size_t scan_cells = 20000);

// Re-derive turning points for an existing branch set.
std::vector<TurningPoint> turning_points(const BranchSet& branch);

// Mark stability by geometric alternation: segments between consecutive
// turning points along the concatenated curve alternate, with the low
// intensity outer segments stable.
BranchSet classify_stability(BranchSet branch);

// Regime taxonomy from the turning-point structure; throws DegenerateError
// for coincident turning points (within 1e-6 half-linewidths) or a
// non-canonical turning-point count.
RegimeLabel classify_regime(const BranchSet& branch,
                            const ResonanceModel& model,
                            double base_temperature);

struct RegimeMap {
    std::vector<double> finesse;          // rows
    std::vector<double> power;            // columns, W
    std::vector<char> cell;               // row-major codes '1'..'6', 'X'

    char at(std::size_t fi, std::size_t pi) const {
        return cell[fi * power.size() + pi];
    }
};

// Phase diagram over a (finesse, power) grid; cells are independent and are
// distributed over `workers` threads (0 = hardware concurrency).
RegimeMap regime_map(const ResonanceModel& model,
                     const CavityParams& params_template,
                     double base_temperature,
                     const std::vector<double>& finesse_grid,
                     const std::vector<double>& power_grid, double chi_stat,
                     std::size_t grid_points = 4000, std::size_t workers = 0);

enum class SweepDirection { up, down };

struct TracePoint {
    double detuning = 0.0;
    double transmission = 0.0;
    double intensity = 0.0;
};

// Quasi-static hysteresis sweep over the branch set: follow the current
// stable segment, jump at turning points to the stable root with the
// smallest |dI| (ties toward lower intensity).
std::vector<TracePoint> hysteresis_trace(const BranchSet& branch,
                                         SweepDirection direction,
                                         double coupling,
                                         std::size_t n_samples = 2001);

// CSV export, columns (i_tilde, phi_l, delta_t_kelvin, stable, sign_branch).
std::string branch_set_csv(const BranchSet& branch);
std::string regime_map_csv(const RegimeMap& map);

}  // namespace cryocav
