#pragma once

#include <stdexcept>
#include <string>

namespace qpulse {

// Invalid configuration or arguments (bad keys, violated preconditions).
// The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: non-Hermitian input, state-invariant violation,
// degenerate fit. CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fock-space truncation too small for the requested state or operator.
class TruncationError : public NumericError {
public:
    using NumericError::NumericError;
};

// File I/O failure. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qpulse
