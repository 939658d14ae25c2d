// Calibration-data ingestion and polynomial model extraction.

#include "cryocav/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "cryocav/constants.hpp"
#include "cryocav/csv.hpp"
#include "cryocav/errors.hpp"

namespace cryocav {

void CalibrationSeries::validate() const {
    if (temperature.size() != frequency_offset.size()) {
        throw InvalidInput("calibration series columns differ in length");
    }
    if (temperature.size() < 2) {
        throw InsufficientDataError("calibration series needs >= 2 points");
    }
    for (std::size_t i = 0; i < temperature.size(); ++i) {
        if (!std::isfinite(temperature[i]) || !std::isfinite(frequency_offset[i])) {
            throw InvalidInput("calibration series contains non-finite values");
        }
        if (i > 0 && !(temperature[i] > temperature[i - 1])) {
            throw InvalidInput("calibration temperatures must be strictly increasing");
        }
    }
    if (!(reference_frequency_hz > 0.0)) {
        throw InvalidInput("reference frequency must be positive");
    }
}

namespace {

constexpr int kMaxDim = 9;

// Jacobi eigendecomposition of a small symmetric matrix; returns eigenvalues
// and fills V with eigenvectors in columns.
void jacobi_eigen(std::array<std::array<double, kMaxDim>, kMaxDim>& a, int n,
                  std::array<double, kMaxDim>& eig,
                  std::array<std::array<double, kMaxDim>, kMaxDim>& v) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) v[i][j] = i == j ? 1.0 : 0.0;
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) eig[i] = a[i][i];
}

// expand p(u(T)) with u = c1 T + c0 into raw powers of T (long double)
std::vector<double> scaled_to_raw(const std::vector<double>& cu, double c0,
                                  double c1) {
    std::vector<long double> res{static_cast<long double>(cu.back())};
    const long double l0 = c0, l1 = c1;
    for (std::size_t k = cu.size() - 1; k-- > 0;) {
        // res = res * (l0 + l1 T) + cu[k]
        std::vector<long double> next(res.size() + 1, 0.0L);
        for (std::size_t i = 0; i < res.size(); ++i) {
            next[i] += res[i] * l0;
            next[i + 1] += res[i] * l1;
        }
        next[0] += static_cast<long double>(cu[k]);
        res = std::move(next);
    }
    return std::vector<double>(res.begin(), res.end());
}

}  // namespace

FitReport fit_resonance(const CalibrationSeries& data, int degree) {
    data.validate();
    if (degree < 2 || degree > 7) {
        throw InvalidInput("fit degree must lie in [2, 7]");
    }
    const std::size_t n_pts = data.temperature.size();
    const int n_coef = degree + 1;
    if (n_pts < static_cast<std::size_t>(n_coef)) {
        std::ostringstream os;
        os << "degree " << degree << " fit needs >= " << n_coef << " points, got "
           << n_pts;
        throw InsufficientDataError(os.str());
    }

    const double t_lo = data.temperature.front();
    const double t_hi = data.temperature.back();
    const double c1 = 2.0 / (t_hi - t_lo);
    const double c0 = -(t_hi + t_lo) / (t_hi - t_lo);

    // normal equations in the scaled basis
    std::array<std::array<double, kMaxDim>, kMaxDim> normal{};
    std::array<double, kMaxDim> rhs{};
    std::vector<double> powers(n_coef);
    for (std::size_t r = 0; r < n_pts; ++r) {
        const double u = c1 * data.temperature[r] + c0;
        powers[0] = 1.0;
        for (int k = 1; k < n_coef; ++k) powers[k] = powers[k - 1] * u;
        for (int i = 0; i < n_coef; ++i) {
            rhs[i] += powers[i] * data.frequency_offset[r];
            for (int j = i; j < n_coef; ++j) normal[i][j] += powers[i] * powers[j];
        }
    }
    for (int i = 0; i < n_coef; ++i) {
        for (int j = 0; j < i; ++j) normal[i][j] = normal[j][i];
    }

    auto work = normal;
    std::array<double, kMaxDim> eig{};
    std::array<std::array<double, kMaxDim>, kMaxDim> vec{};
    jacobi_eigen(work, n_coef, eig, vec);
    double lam_max = 0.0, lam_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_coef; ++i) {
        lam_max = std::max(lam_max, std::abs(eig[i]));
        lam_min = std::min(lam_min, std::abs(eig[i]));
    }
    const double cond = lam_min > 0.0 ? lam_max / lam_min
                                      : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12)) {
        std::ostringstream os;
        os << "normal system condition estimate " << cond << " exceeds 1e12";
        throw IllConditionedError(os.str());
    }

    // x = V diag(1/eig) V^T rhs
    std::vector<double> coeff_u(n_coef, 0.0);
    for (int m = 0; m < n_coef; ++m) {
        double proj = 0.0;
        for (int i = 0; i < n_coef; ++i) proj += vec[i][m] * rhs[i];
        proj /= eig[m];
        for (int i = 0; i < n_coef; ++i) coeff_u[i] += vec[i][m] * proj;
    }

    FitReport report;
    report.condition_estimate = cond;
    report.model.coefficients = scaled_to_raw(coeff_u, c0, c1);
    report.model.t_min = t_lo;
    report.model.t_max = t_hi;
    report.model.reference_frequency_hz = data.reference_frequency_hz;
    try {
        report.model.t_star = inversion_temperature(report.model);
    } catch (const NoInversionError&) {
        report.model.t_star.reset();
    }

    report.residuals.resize(n_pts);
    double ss = 0.0;
    for (std::size_t r = 0; r < n_pts; ++r) {
        const double u = c1 * data.temperature[r] + c0;
        double fit = coeff_u[n_coef - 1];
        for (int k = n_coef - 2; k >= 0; --k) fit = fit * u + coeff_u[k];
        report.residuals[r] = data.frequency_offset[r] - fit;
        ss += report.residuals[r] * report.residuals[r];
    }
    report.rms_residual = std::sqrt(ss / static_cast<double>(n_pts));
    return report;
}

double extract_chi_stat(double p_threshold, const CavityParams& params,
                        double base_temperature, double t_star) {
    params.validate();
    if (!(p_threshold > 0.0)) {
        throw InvalidInput("threshold power must be positive");
    }
    if (!(t_star > base_temperature)) {
        throw InvalidInput("inversion temperature must exceed the base temperature");
    }
    return (t_star - base_temperature) * constants::pi /
           (p_threshold * params.coupling * params.finesse);
}

CalibrationSeries load_calibration_csv(const std::string& path) {
    const auto doc = csv::read_csv(path);
    if (doc.header.size() != 2) {
        throw CsvFormatError(path, 1, "expected two columns (temperature_K, frequency_offset_hz)");
    }
    CalibrationSeries series;
    series.source = path;
    for (const auto& comment : doc.comments) {
        const auto eq = comment.find('=');
        if (eq == std::string::npos) continue;
        std::string key = comment.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        if (key == "reference_frequency_hz") {
            std::string value = comment.substr(eq + 1);
            value.erase(std::remove_if(value.begin(), value.end(), ::isspace),
                        value.end());
            series.reference_frequency_hz = csv::parse_field(value, path, 0);
        }
    }
    for (const auto& row : doc.rows) {
        if (row.fields.size() != 2) {
            throw CsvFormatError(path, row.line, "expected two fields");
        }
        series.temperature.push_back(
            csv::parse_field(row.fields[0], path, row.line));
        series.frequency_offset.push_back(
            csv::parse_field(row.fields[1], path, row.line));
    }
    series.validate();
    return series;
}

}  // namespace cryocav
