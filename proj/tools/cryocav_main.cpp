// cryocav command-line interface: model fitting, static branch computation,
// regime maps, dynamic sweeps, TLS curves and Brownian-motion diagnostics.
// All outputs are CSV/JSON with the resolved configuration echoed as '#'
// comment lines; files are written atomically.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cryocav/constants.hpp"
#include "cryocav/csv.hpp"
#include "cryocav/dynamics.hpp"
#include "cryocav/errors.hpp"
#include "cryocav/fit.hpp"
#include "cryocav/kernels.hpp"
#include "cryocav/reference_data.hpp"
#include "cryocav/steady_state.hpp"
#include "cryocav/tls.hpp"
#include "cryocav/units.hpp"

namespace {

using cryocav::units::parse_grid;
using cryocav::units::parse_quantity;

struct CavityOpts {
    std::string radius = "30um";
    double index = 1.44;
    std::string finesse = "44000";
    double coupling = 1.0;
    std::string wavelength = "1550nm";

    void attach(CLI::App* cmd) {
        cmd->add_option("--radius", radius, "cavity radius (length, e.g. 30um)");
        cmd->add_option("--index", index, "refractive index");
        cmd->add_option("--finesse", finesse, "cavity finesse");
        cmd->add_option("--coupling", coupling, "coupling efficiency K in [0,1]");
        cmd->add_option("--wavelength", wavelength, "laser wavelength (e.g. 1550nm)");
    }

    cryocav::CavityParams resolve() const {
        cryocav::CavityParams p;
        p.radius = parse_quantity(radius, "m");
        p.index = index;
        p.finesse = parse_quantity(finesse, "");
        p.coupling = coupling;
        p.laser_frequency =
            cryocav::constants::c_light / parse_quantity(wavelength, "m");
        p.validate();
        return p;
    }
};

cryocav::ResonanceModel resolve_model(const std::string& path) {
    if (path.empty()) return cryocav::reference_model();
    return cryocav::load_resonance_model(path);
}

std::string comment_block(const std::string& subcommand,
                          const std::map<std::string, std::string>& kv) {
    std::string out = "# cryocav " + subcommand + "\n";
    for (const auto& [k, v] : kv) out += "# " + k + " = " + v + "\n";
    return out;
}

std::string fd(double v) { return cryocav::csv::format_double(v); }

// mu comes either directly or from power x chi; giving both is an error
double resolve_mu(const std::string& mu_flag, const std::string& power_flag,
                  const std::string& chi_flag, const cryocav::CavityParams& p,
                  double* power_out, double* chi_out) {
    const bool have_mu = !mu_flag.empty();
    const bool have_power = !power_flag.empty() || !chi_flag.empty();
    if (have_mu && have_power) {
        throw cryocav::InvalidInput("--mu conflicts with --power/--chi; give one");
    }
    if (have_mu) return parse_quantity(mu_flag, "K");
    if (power_flag.empty() || chi_flag.empty()) {
        throw cryocav::InvalidInput("need either --mu or both --power and --chi");
    }
    const double power = parse_quantity(power_flag, "W");
    const double chi = parse_quantity(chi_flag, "");
    if (power_out) *power_out = power;
    if (chi_out) *chi_out = chi;
    return cryocav::mu_parameter(power, p, chi);
}

int run_static(const CavityOpts& cavity, const std::string& model_path,
               const std::string& mu_flag, const std::string& power_flag,
               const std::string& chi_flag, const std::string& t0_flag,
               const std::string& grid_flag, const std::string& output,
               const std::string& format) {
    const auto params = cavity.resolve();
    const auto model = resolve_model(model_path);
    double power = 0.0, chi = 0.0;
    const double mu = resolve_mu(mu_flag, power_flag, chi_flag, params, &power, &chi);
    const double t0 = parse_quantity(t0_flag, "K");
    const auto gspec = parse_grid(grid_flag, "");
    if (!(gspec.lo > 0.0 && gspec.hi <= 1.0)) {
        throw cryocav::InvalidInput("intensity grid must lie in (0, 1]");
    }

    auto branch = cryocav::classify_stability(
        cryocav::branch_curve(model, params, mu, t0, gspec.materialize()));

    std::map<std::string, std::string> kv{
        {"model", model_path.empty() ? "builtin-reference" : model_path},
        {"radius_m", fd(params.radius)},
        {"index", fd(params.index)},
        {"finesse", fd(params.finesse)},
        {"coupling", fd(params.coupling)},
        {"mu_K", fd(mu)},
        {"t0_K", fd(t0)},
        {"grid", grid_flag},
        {"turning_points", std::to_string(branch.turning_points.size())},
    };
    if (!power_flag.empty()) kv["power_W"] = fd(power);
    if (!chi_flag.empty()) kv["chi_K_per_W"] = fd(chi);

    if (format == "json") {
        nlohmann::ordered_json j;
        j["mu_K"] = mu;
        j["t0_K"] = t0;
        auto tps = nlohmann::ordered_json::array();
        for (const auto& tp : branch.turning_points) {
            tps.push_back({{"phi_l", tp.detuning},
                           {"i_tilde", tp.intensity},
                           {"sign_branch",
                            tp.branch == cryocav::SignBranch::plus ? "+" : "-"}});
        }
        j["turning_points"] = tps;
        auto pts = nlohmann::ordered_json::array();
        const auto emit = [&](const std::vector<cryocav::BranchPoint>& v,
                              const char* sign) {
            for (const auto& p : v) {
                pts.push_back({{"i_tilde", p.intensity},
                               {"phi_l", p.detuning},
                               {"delta_t_kelvin", p.temperature_rise},
                               {"stable", p.stable},
                               {"sign_branch", sign}});
            }
        };
        emit(branch.upper_sign_branch, "+");
        emit(branch.lower_sign_branch, "-");
        j["points"] = pts;
        cryocav::csv::write_file_atomic(output, j.dump(2) + "\n");
    } else {
        cryocav::csv::write_file_atomic(
            output, comment_block("static", kv) + cryocav::branch_set_csv(branch));
    }
    return 0;
}

int run_regimes(const CavityOpts& cavity, const std::string& model_path,
                const std::string& chi_flag, const std::string& t0_flag,
                const std::string& finesse_grid, const std::string& power_grid,
                std::size_t grid_points, std::size_t workers,
                const std::string& output) {
    const auto params = cavity.resolve();
    const auto model = resolve_model(model_path);
    const double chi = parse_quantity(chi_flag, "");
    const double t0 = parse_quantity(t0_flag, "K");
    const auto fgrid = parse_grid(finesse_grid, "").materialize();
    const auto pgrid = parse_grid(power_grid, "W").materialize();

    const auto map = cryocav::regime_map(model, params, t0, fgrid, pgrid, chi,
                                         grid_points, workers);
    std::map<std::string, std::string> kv{
        {"model", model_path.empty() ? "builtin-reference" : model_path},
        {"radius_m", fd(params.radius)},
        {"index", fd(params.index)},
        {"coupling", fd(params.coupling)},
        {"chi_K_per_W", fd(chi)},
        {"t0_K", fd(t0)},
        {"finesse_grid", finesse_grid},
        {"power_grid", power_grid},
        {"intensity_grid_points", std::to_string(grid_points)},
    };
    cryocav::csv::write_file_atomic(
        output, comment_block("regimes", kv) + cryocav::regime_map_csv(map));
    return 0;
}

int run_sweep(const CavityOpts& cavity, const std::string& model_path,
              const std::string& power_flag, const std::string& chi_flag,
              const std::string& tau_flag, const std::string& t0_flag,
              double phi_start, double phi_end, double rate,
              std::size_t samples, const std::string& output) {
    const auto params = cavity.resolve();
    const auto model = resolve_model(model_path);
    cryocav::ThermalKernel kernel;
    kernel.chi_stat = parse_quantity(chi_flag, "");
    kernel.tau_thermal = parse_quantity(tau_flag, "s");
    cryocav::SweepConfig config;
    config.phi_start = phi_start;
    config.phi_end = phi_end;
    config.scan_rate = rate;
    config.input_power = parse_quantity(power_flag, "W");
    config.base_temperature = parse_quantity(t0_flag, "K");
    config.n_samples = samples;

    const auto trace = cryocav::integrate_sweep(config, kernel, params, model);
    std::vector<std::string> comments{
        "cryocav sweep",
        "model = " + (model_path.empty() ? std::string("builtin-reference")
                                         : model_path),
        "radius_m = " + fd(params.radius),
        "finesse = " + fd(params.finesse),
        "coupling = " + fd(params.coupling),
        "power_W = " + fd(config.input_power),
        "chi_K_per_W = " + fd(kernel.chi_stat),
        "tau_thermal_s = " + fd(kernel.tau_thermal),
        "t0_K = " + fd(config.base_temperature),
        "phi_start = " + fd(config.phi_start),
        "phi_end = " + fd(config.phi_end),
        "scan_rate_hl_per_s = " + fd(config.scan_rate),
    };
    cryocav::csv::write_file_atomic(output,
                                    cryocav::sweep_csv(trace, comments));
    return 0;
}

int run_tls(const std::string& tls_path, const std::string& freq_flag,
            const std::string& grid_flag, const std::string& tref_flag,
            const std::string& output, const std::string& format) {
    const cryocav::TlsModel tls = tls_path.empty()
                                      ? cryocav::silica_tls_fit()
                                      : cryocav::load_tls_model(tls_path);
    const double freq = parse_quantity(freq_flag, "Hz");
    const double omega = 2.0 * cryocav::constants::pi * freq;
    const double t_ref = parse_quantity(tref_flag, "K");
    const auto grid = parse_grid(grid_flag, "K").materialize();

    std::map<std::string, std::string> kv{
        {"tls_model", tls_path.empty() ? "builtin-silica-fit" : tls_path},
        {"provenance", tls.provenance},
        {"frequency_hz", fd(freq)},
        {"t_ref_K", fd(t_ref)},
        {"temp_grid", grid_flag},
    };

    if (format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (double t : grid) {
            rows.push_back({{"temperature_K", t},
                            {"q_inverse", 1.0 / cryocav::q_total(tls, t, omega)},
                            {"q_total", cryocav::q_total(tls, t, omega)},
                            {"rel_freq_shift",
                             cryocav::frequency_shift(tls, t, omega, t_ref)}});
        }
        nlohmann::ordered_json j;
        j["frequency_hz"] = freq;
        j["rows"] = rows;
        cryocav::csv::write_file_atomic(output, j.dump(2) + "\n");
        return 0;
    }

    std::string out = comment_block("tls", kv);
    out += "temperature_K,q_inverse,q_total,rel_freq_shift\n";
    for (double t : grid) {
        const double q = cryocav::q_total(tls, t, omega);
        out += fd(t);
        out += ',';
        out += fd(1.0 / q);
        out += ',';
        out += fd(q);
        out += ',';
        out += fd(cryocav::frequency_shift(tls, t, omega, t_ref));
        out += '\n';
    }
    cryocav::csv::write_file_atomic(output, out);
    return 0;
}

int run_brownian(const std::string& temp_flag, const std::string& mass_flag,
                 const std::string& freq_flag, double quality,
                 const std::string& spectrum_out) {
    const double temp = parse_quantity(temp_flag, "K");
    cryocav::MechMode mode;
    mode.effective_mass = parse_quantity(mass_flag, "kg");
    mode.frequency = parse_quantity(freq_flag, "Hz");
    if (quality > 0.0) mode.quality_factor = quality;

    const double omega = 2.0 * cryocav::constants::pi * mode.frequency;
    std::printf("temperature_K        = %s\n", fd(temp).c_str());
    std::printf("frequency_hz         = %s\n", fd(mode.frequency).c_str());
    std::printf("effective_mass_kg    = %s\n", fd(mode.effective_mass).c_str());
    std::printf("occupancy_classical  = %s\n",
                fd(cryocav::phonon_occupancy(temp, omega)).c_str());
    std::printf("occupancy_bose       = %s\n",
                fd(cryocav::phonon_occupancy_bose(temp, omega)).c_str());
    std::printf("brownian_rms_m       = %s\n",
                fd(cryocav::brownian_rms(temp, mode)).c_str());

    if (!spectrum_out.empty()) {
        if (!mode.quality_factor) {
            throw cryocav::InvalidInput("--spectrum-out requires --q");
        }
        const double q = *mode.quality_factor;
        const double fwhm = mode.frequency / q;
        std::vector<double> grid;
        const double lo = std::max(mode.frequency - 50.0 * fwhm, fwhm * 1e-3);
        const double hi = mode.frequency + 50.0 * fwhm;
        constexpr std::size_t n = 20001;
        for (std::size_t i = 0; i < n; ++i) {
            grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        }
        const auto spec = cryocav::displacement_spectrum(temp, mode, grid);
        std::string out = comment_block(
            "brownian", {{"temperature_K", fd(temp)},
                         {"frequency_hz", fd(mode.frequency)},
                         {"effective_mass_kg", fd(mode.effective_mass)},
                         {"quality_factor", fd(q)}});
        out += "frequency_hz,displacement_psd_m2_per_hz\n";
        for (const auto& [f, s] : spec) {
            out += fd(f);
            out += ',';
            out += fd(s);
            out += '\n';
        }
        cryocav::csv::write_file_atomic(spectrum_out, out);
    }
    return 0;
}

int run_fit(const std::string& input, int degree, const std::string& output) {
    const auto series = cryocav::load_calibration_csv(input);
    const auto report = cryocav::fit_resonance(series, degree);
    std::fprintf(stderr, "fit: %zu points, degree %d, rms residual %s Hz\n",
                 series.temperature.size(), degree,
                 fd(report.rms_residual).c_str());
    if (report.model.t_star) {
        std::fprintf(stderr, "fit: inversion temperature %s K\n",
                     fd(*report.model.t_star).c_str());
    }
    cryocav::save_resonance_model(report.model, output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermo-optical multistability and TLS mechanics toolkit"};
    app.require_subcommand(1);

    std::string kernels_flag = "auto";
    app.add_option("--kernels", kernels_flag,
                   "compute backend: auto, scalar or avx2");

    // static
    auto* cmd_static = app.add_subcommand(
        "static", "steady-state branch set for one configuration");
    CavityOpts cav_static;
    cav_static.attach(cmd_static);
    std::string st_model, st_mu, st_power, st_chi, st_t0 = "2.3",
                          st_grid = "1e-4:1:4000log", st_out = "branch.csv",
                          st_format = "csv";
    cmd_static->add_option("--model", st_model, "resonance model JSON (default: built-in)");
    cmd_static->add_option("--mu", st_mu, "heating parameter mu (K)");
    cmd_static->add_option("--power", st_power, "input power (e.g. 260uW)");
    cmd_static->add_option("--chi", st_chi, "static heating coefficient (K/W)");
    cmd_static->add_option("--t0", st_t0, "base temperature (K)");
    cmd_static->add_option("--grid", st_grid, "intensity grid lo:hi:countX");
    cmd_static->add_option("--output", st_out, "output path");
    cmd_static->add_option("--format", st_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // regimes
    auto* cmd_regimes =
        app.add_subcommand("regimes", "regime phase diagram over (finesse, power)");
    CavityOpts cav_regimes;
    cav_regimes.attach(cmd_regimes);
    std::string rg_model, rg_chi = "4.5", rg_t0 = "4", rg_fgrid = "1e3:1e6:50log",
                          rg_pgrid = "1uW:1mW:50log", rg_out = "regimes.csv";
    std::size_t rg_points = 4000, rg_workers = 0;
    cmd_regimes->add_option("--model", rg_model, "resonance model JSON");
    cmd_regimes->add_option("--chi", rg_chi, "static heating coefficient (K/W)");
    cmd_regimes->add_option("--t0", rg_t0, "base temperature (K)");
    cmd_regimes->add_option("--finesse-grid", rg_fgrid, "finesse grid lo:hi:countX");
    cmd_regimes->add_option("--power-grid", rg_pgrid, "power grid lo:hi:countX");
    cmd_regimes->add_option("--grid-points", rg_points, "internal intensity grid size");
    cmd_regimes->add_option("--workers", rg_workers,
                            "worker threads (0 = hardware concurrency)");
    cmd_regimes->add_option("--output", rg_out, "output path");

    // sweep
    auto* cmd_sweep =
        app.add_subcommand("sweep", "dynamic laser-frequency sweep");
    CavityOpts cav_sweep;
    cav_sweep.attach(cmd_sweep);
    std::string sw_model, sw_power = "0W", sw_chi = "4.5", sw_tau = "1ms",
                          sw_t0 = "2.3", sw_out = "sweep.csv";
    double sw_phi_start = 5.0, sw_phi_end = -5.0, sw_rate = 50.0;
    std::size_t sw_samples = 2001;
    cmd_sweep->add_option("--model", sw_model, "resonance model JSON");
    cmd_sweep->add_option("--power", sw_power, "input power");
    cmd_sweep->add_option("--chi", sw_chi, "static heating coefficient (K/W)");
    cmd_sweep->add_option("--tau", sw_tau, "thermal relaxation time");
    cmd_sweep->add_option("--t0", sw_t0, "base temperature (K)");
    cmd_sweep->add_option("--phi-start", sw_phi_start, "start detuning (half-linewidths)");
    cmd_sweep->add_option("--phi-end", sw_phi_end, "end detuning");
    cmd_sweep->add_option("--rate", sw_rate, "scan rate (half-linewidths per second)");
    cmd_sweep->add_option("--samples", sw_samples, "output samples");
    cmd_sweep->add_option("--output", sw_out, "output path");

    // tls
    auto* cmd_tls = app.add_subcommand("tls", "Q(T) and frequency-shift table");
    std::string tl_model, tl_freq = "63MHz", tl_grid = "1.6:80:200lin",
                          tl_tref = "1.6", tl_out = "tls.csv", tl_format = "csv";
    cmd_tls->add_option("--tls", tl_model, "TLS model JSON (default: built-in fit)");
    cmd_tls->add_option("--frequency", tl_freq, "mechanical frequency");
    cmd_tls->add_option("--temp-grid", tl_grid, "temperature grid lo:hi:countX");
    cmd_tls->add_option("--t-ref", tl_tref, "frequency-shift reference temperature");
    cmd_tls->add_option("--output", tl_out, "output path");
    cmd_tls->add_option("--format", tl_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // brownian
    auto* cmd_brownian =
        app.add_subcommand("brownian", "thermal-motion report and spectrum");
    std::string br_temp = "1.6", br_mass = "10ng", br_freq = "63MHz",
                br_spec_out;
    double br_q = 0.0;
    cmd_brownian->add_option("--temp", br_temp, "temperature (K)");
    cmd_brownian->add_option("--mass", br_mass, "effective mass (e.g. 10ng)");
    cmd_brownian->add_option("--frequency", br_freq, "mode frequency");
    cmd_brownian->add_option("--q", br_q, "mechanical quality factor");
    cmd_brownian->add_option("--spectrum-out", br_spec_out,
                             "write displacement spectrum CSV here");

    // fit
    auto* cmd_fit = app.add_subcommand("fit", "fit a resonance model to CSV data");
    std::string ft_input, ft_out = "model.json";
    int ft_degree = 7;
    cmd_fit->add_option("--input", ft_input, "calibration CSV")->required();
    cmd_fit->add_option("--degree", ft_degree, "polynomial degree (2..7)");
    cmd_fit->add_option("--output", ft_out, "model JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        cryocav::kernels::force_backend(kernels_flag.c_str());
        if (cmd_static->parsed()) {
            return run_static(cav_static, st_model, st_mu, st_power, st_chi,
                              st_t0, st_grid, st_out, st_format);
        }
        if (cmd_regimes->parsed()) {
            return run_regimes(cav_regimes, rg_model, rg_chi, rg_t0, rg_fgrid,
                               rg_pgrid, rg_points, rg_workers, rg_out);
        }
        if (cmd_sweep->parsed()) {
            return run_sweep(cav_sweep, sw_model, sw_power, sw_chi, sw_tau,
                             sw_t0, sw_phi_start, sw_phi_end, sw_rate,
                             sw_samples, sw_out);
        }
        if (cmd_tls->parsed()) {
            return run_tls(tl_model, tl_freq, tl_grid, tl_tref, tl_out,
                           tl_format);
        }
        if (cmd_brownian->parsed()) {
            return run_brownian(br_temp, br_mass, br_freq, br_q, br_spec_out);
        }
        if (cmd_fit->parsed()) {
            return run_fit(ft_input, ft_degree, ft_out);
        }
    } catch (const cryocav::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cryocav::NumericFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
