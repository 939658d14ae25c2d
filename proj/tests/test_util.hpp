#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cryocav/dynamics.hpp"
#include "cryocav/steady_state.hpp"

namespace testutil {

inline std::filesystem::path temp_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("cryocav_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline int run_cli(const std::string& args) {
    const std::string cmd = std::string(CRYOCAV_CLI_PATH) + " " + args +
                            " >/dev/null 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

inline std::string data_path(const std::string& name) {
    return std::string(CRYOCAV_SOURCE_DIR) + "/data/" + name;
}

// Detuning positions of discontinuities in a sweep trace: steps in intensity
// that tower over the local step size.
inline std::vector<double> detect_jumps(
    const std::vector<cryocav::SweepSample>& trace, double min_step = 0.03,
    double ratio = 8.0, int window = 40) {
    std::vector<double> jumps;
    const int n = static_cast<int>(trace.size());
    std::vector<double> steps(n > 1 ? n - 1 : 0);
    for (int i = 0; i + 1 < n; ++i) {
        steps[i] = std::abs(trace[i + 1].i_tilde - trace[i].i_tilde);
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (steps[i] < min_step) continue;
        double neighborhood = 0.0;
        int count = 0;
        for (int k = std::max(0, i - window);
             k < std::min(n - 1, i + window); ++k) {
            if (k == i) continue;
            neighborhood = std::max(neighborhood, steps[k]);
            ++count;
        }
        if (count == 0 || steps[i] > ratio * neighborhood ||
            steps[i] > 0.3) {
            // merge with a previous jump closer than a few samples
            const double phi = 0.5 * (trace[i].phi_l + trace[i + 1].phi_l);
            if (!jumps.empty() && std::abs(jumps.back() - phi) < 0.05) continue;
            jumps.push_back(phi);
        }
    }
    return jumps;
}

// brute-force dense-grid sign-scan root oracle for the static equation,
// independent of the steady_states implementation path (linear grid)
inline std::vector<double> brute_force_roots(const cryocav::ResonanceModel& model,
                                             const cryocav::CavityParams& params,
                                             double mu, double t0, double phi_l,
                                             std::size_t cells = 20000) {
    const double hl = cryocav::half_linewidth(params);
    const auto g = [&](double intensity) {
        const double shift =
            cryocav::eval_resonance(model, t0 + mu * intensity) / hl;
        const double u = phi_l - shift;
        return 1.0 / intensity - 1.0 - u * u;
    };
    // conservative lower bound for the smallest admissible root
    double wmax = 0.0;
    for (int k = 0; k <= 64; ++k) {
        const double shift =
            cryocav::eval_resonance(model, t0 + mu * (k / 64.0 + 1e-12)) / hl;
        wmax = std::max(wmax, std::abs(phi_l - shift));
    }
    const double lo_bound =
        std::min(0.5 / (1.0 + (wmax + 1.0) * (wmax + 1.0)), 1e-4);
    std::vector<double> roots;
    double prev_i = lo_bound, prev_g = g(prev_i);
    for (std::size_t k = 1; k <= cells; ++k) {
        const double cur_i =
            lo_bound + (1.0 - lo_bound) * static_cast<double>(k) /
                           static_cast<double>(cells);
        const double cur_g = g(cur_i);
        if ((prev_g > 0) != (cur_g > 0) || cur_g == 0.0) {
            double a = prev_i, b = cur_i, fa = prev_g;
            for (int it = 0; it < 100 && (b - a) > 1e-13; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = g(m);
                if ((fm > 0) == (fa > 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_i = cur_i;
        prev_g = cur_g;
    }
    return roots;
}

}  // namespace testutil
