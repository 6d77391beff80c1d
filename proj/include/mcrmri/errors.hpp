#pragma once

#include <stdexcept>
#include <string>

namespace mcrmri {

// Error taxonomy maps 1:1 onto the CLI exit codes:
//   FormatError -> 2 (input, config, file format)
//   NumericError -> 3 (invalid values, degenerate problems)
//   ConvergenceError -> 4 (iterative solver gave up)

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mcrmri
