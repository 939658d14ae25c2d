#pragma once

#include <stdexcept>
#include <string>

namespace cryocav {

// Invalid user input: bad parameters, malformed files, conflicting options.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure could not produce a valid result.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& msg) : std::runtime_error(msg) {}
};

class NoInversionError : public NumericFailure {
public:
    explicit NoInversionError(const std::string& msg) : NumericFailure(msg) {}
};

class OutOfTableError : public InvalidInput {
public:
    explicit OutOfTableError(const std::string& msg) : InvalidInput(msg) {}
};

class GridTooCoarseError : public NumericFailure {
public:
    explicit GridTooCoarseError(const std::string& msg) : NumericFailure(msg) {}
};

class DegenerateError : public NumericFailure {
public:
    explicit DegenerateError(const std::string& msg) : NumericFailure(msg) {}
};

class IllConditionedError : public NumericFailure {
public:
    explicit IllConditionedError(const std::string& msg) : NumericFailure(msg) {}
};

class InsufficientDataError : public InvalidInput {
public:
    explicit InsufficientDataError(const std::string& msg) : InvalidInput(msg) {}
};

class StiffnessError : public NumericFailure {
public:
    explicit StiffnessError(const std::string& msg) : NumericFailure(msg) {}
};

class CsvFormatError : public InvalidInput {
public:
    CsvFormatError(const std::string& file, long line, const std::string& msg)
        : InvalidInput(file + ":" + std::to_string(line) + ": " + msg) {}
};

}  // namespace cryocav
