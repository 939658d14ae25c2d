#pragma once

#include <string>
#include <vector>

namespace cryocav::csv {

// Shortest round-trippable decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);

// Parsed non-comment row of a CSV file.
struct Row {
    long line = 0;
    std::vector<std::string> fields;
};

struct Document {
    std::vector<std::string> comments;   // '#' lines, stripped of the marker
    std::vector<std::string> header;     // first non-comment row
    std::vector<Row> rows;
};

Document read_csv(const std::string& path);

double parse_field(const std::string& field, const std::string& file,
                   long line);

// Write atomically: temp file in the same directory, then rename. Partial
// output files never appear under the target name.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cryocav::csv
