#include "cryocav/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "cryocav/errors.hpp"

namespace cryocav::units {

namespace {

const std::map<char, double>& prefixes() {
    static const std::map<char, double> table = {
        {'f', 1e-15}, {'p', 1e-12}, {'n', 1e-9}, {'u', 1e-6}, {'m', 1e-3},
        {'k', 1e3},   {'M', 1e6},   {'G', 1e9},  {'T', 1e12},
    };
    return table;
}

// suffix factor relative to the expected base unit; grams are accepted for
// masses and converted to kg
double suffix_factor(const std::string& suffix, const std::string& expected,
                     const std::string& original) {
    if (suffix.empty()) return 1.0;
    if (expected.empty()) {
        throw InvalidInput("'" + original + "': expected a bare number");
    }

    std::string base = expected;
    double base_factor = 1.0;
    auto match = [&](const std::string& unit, double factor) {
        if (suffix == unit) {
            base_factor = factor;
            return true;
        }
        if (suffix.size() > unit.size() &&
            suffix.compare(1, std::string::npos, unit) == 0) {
            const auto it = prefixes().find(suffix[0]);
            if (it != prefixes().end()) {
                base_factor = factor * it->second;
                return true;
            }
        }
        return false;
    };

    if (match(base, 1.0)) return base_factor;
    if (expected == "kg" && match("g", 1e-3)) return base_factor;
    throw InvalidInput("'" + original + "': expected a quantity in " + expected);
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& expected_unit) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw InvalidInput("empty quantity");
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) {
        throw InvalidInput("'" + text + "': not a number");
    }
    const std::string suffix(end);
    const double factor = suffix_factor(suffix, expected_unit, text);
    const double result = value * factor;
    if (!std::isfinite(result)) {
        throw InvalidInput("'" + text + "': not a finite quantity");
    }
    return result;
}

std::vector<double> GridSpec::materialize() const {
    if (count < 2) throw InvalidInput("grid needs at least 2 points");
    if (!(lo < hi)) throw InvalidInput("grid requires lo < hi");
    if (logarithmic && !(lo > 0.0)) {
        throw InvalidInput("log grid requires positive endpoints");
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = logarithmic ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

GridSpec parse_grid(const std::string& text, const std::string& expected_unit) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw InvalidInput("'" + text + "': grid syntax is lo:hi:countX (X = lin|log)");
    }
    GridSpec spec;
    spec.lo = parse_quantity(text.substr(0, c1), expected_unit);
    spec.hi = parse_quantity(text.substr(c1 + 1, c2 - c1 - 1), expected_unit);
    std::string tail = text.substr(c2 + 1);
    if (tail.size() > 3 && tail.substr(tail.size() - 3) == "log") {
        spec.logarithmic = true;
        tail.resize(tail.size() - 3);
    } else if (tail.size() > 3 && tail.substr(tail.size() - 3) == "lin") {
        spec.logarithmic = false;
        tail.resize(tail.size() - 3);
    } else {
        throw InvalidInput("'" + text + "': grid count must end in lin or log");
    }
    char* end = nullptr;
    const long n = std::strtol(tail.c_str(), &end, 10);
    if (end == tail.c_str() || *end != '\0' || n < 2) {
        throw InvalidInput("'" + text + "': bad grid point count");
    }
    spec.count = static_cast<std::size_t>(n);
    if (!(spec.lo < spec.hi)) {
        throw InvalidInput("'" + text + "': grid requires lo < hi");
    }
    return spec;
}

}  // namespace cryocav::units
