#include "cryocav/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cryocav/errors.hpp"

namespace cryocav::csv {

std::string format_double(double v) {
    // shortest decimal form that parses back exactly
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

Document read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    Document doc;
    std::string line;
    long line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        const auto b = trimmed.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;  // blank line
        if (trimmed[b] == '#') {
            std::string comment = trimmed.substr(b + 1);
            if (!comment.empty() && comment.front() == ' ') comment.erase(0, 1);
            doc.comments.push_back(comment);
            continue;
        }
        auto fields = split_fields(trimmed);
        if (!have_header) {
            doc.header = std::move(fields);
            have_header = true;
        } else {
            doc.rows.push_back({line_no, std::move(fields)});
        }
    }
    if (!have_header) {
        throw CsvFormatError(path, line_no, "missing header row");
    }
    return doc;
}

double parse_field(const std::string& field, const std::string& file,
                   long line) {
    if (field.empty()) throw CsvFormatError(file, line, "empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
        throw CsvFormatError(file, line, "malformed number '" + field + "'");
    }
    return v;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path()
                                                  : fs::path(".");
    const fs::path tmp = dir / (target.filename().string() + ".tmp." +
                                std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw InvalidInput("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot rename " + tmp.string() + " to " + path +
                           ": " + ec.message());
    }
}

}  // namespace cryocav::csv
