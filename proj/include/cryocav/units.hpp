#pragma once

#include <string>
#include <vector>

namespace cryocav::units {

// Quantity grammar for CLI flags: <number>[<prefix>][<unit>], e.g. "260uW",
// "30um", "12.55MHz", "1.6" (bare numbers are SI base units). Prefixes
// f p n u m k M G T; units W, m, Hz, s, K. The paper's quantities span nine
// orders of magnitude, so raw floats invite unit bugs.
//
// `expected_unit` is one of "W", "m", "Hz", "s", "K" or "" (dimensionless):
// a quantity carrying a different unit is rejected.
double parse_quantity(const std::string& text, const std::string& expected_unit);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    bool logarithmic = false;

    std::vector<double> materialize() const;
};

// Grid grammar "lo:hi:countX" with X in {lin,log}; lo/hi accept unit
// suffixes, e.g. "1uW:1mW:50log".
GridSpec parse_grid(const std::string& text, const std::string& expected_unit);

}  // namespace cryocav::units
