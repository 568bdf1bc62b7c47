#pragma once

#include <stdexcept>
#include <string>

namespace finray {

// Bad user input: configs, CLI arguments, malformed or out-of-bounds data.
// The CLI maps these to exit status 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// File-system and parse failures on input/output paths. Exit status 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside an algorithm (divergence, non-finite values).
// The CLI maps these to exit status 1.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace finray
