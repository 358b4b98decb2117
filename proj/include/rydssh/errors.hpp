#pragma once

#include <stdexcept>
#include <string>

namespace rydssh {

// Malformed lattice/config input. Maps to CLI exit code 1.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values, degenerate inputs, ill-posed fits. Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Valid input the model does not cover (odd chain for edge splitting, field above the ramp peak).
class UnsupportedError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace rydssh
