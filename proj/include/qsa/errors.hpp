#pragma once

#include <stdexcept>
#include <string>

namespace qsa {

/// Malformed input file (ragged lines, illegal characters, bad header).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dataset too small for the requested slicing or analysis.
class InsufficientRowsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request exceeds a hard resource bound (e.g. statevector qubit cap).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that are individually valid but mutually inconsistent.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace qsa
