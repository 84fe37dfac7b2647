#pragma once

#include <stdexcept>
#include <string>

namespace sqaoa {

// Malformed arguments: length mismatches, out-of-range values, bad files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds what the exact enumeration or dense simulation supports.
class CapabilityError : public std::length_error {
public:
    using std::length_error::length_error;
};

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite objective or similar breakdown inside an iterative method.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sqaoa
