#pragma once

#include <stdexcept>
#include <string>

namespace moblab {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad call arguments (gcd violations, range mismatches, malformed input).
struct ArgumentError : Error {
    using Error::Error;
};

// Mathematically out-of-range parameters (theta <= 3/4, P >= Q, ...).
struct ParameterError : Error {
    using Error::Error;
};

// A value does not carry enough precision to certify the requested result.
struct PrecisionError : Error {
    using Error::Error;
};

// Work or memory budget exceeded.
struct ResourceError : Error {
    using Error::Error;
};

}  // namespace moblab
