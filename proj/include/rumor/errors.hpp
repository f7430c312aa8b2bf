#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rumor {

// Exception hierarchy. The CLI maps each family to an exit code:
// UsageError -> 2, DataError -> 3, NumericalError -> 4.

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input record; line numbers are 1-based.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace rumor
