#pragma once

#include <stdexcept>
#include <string>

namespace grouplaw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element fed to a handle it does not belong to.
struct TypeError : Error {
    using Error::Error;
};

// Bad argument value (m < 2, wrong dimension, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Group descriptor failed validation (A^m != I, unsupported nesting, ...).
struct ConstructionError : Error {
    using Error::Error;
};

// An enumeration or tuple sweep exceeded its configured budget.
struct BudgetError : Error {
    using Error::Error;
};

// Text input (law, descriptor, config) failed to parse.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), pos(position) {}
    explicit ParseError(const std::string& what) : Error(what), pos(0) {}
    std::size_t pos;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace grouplaw
