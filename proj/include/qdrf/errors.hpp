// errors.hpp — exception hierarchy
//
// ConfigError maps to CLI exit code 1, NumericalError to exit code 2.
// Precondition violations on library calls throw std::invalid_argument.

#pragma once

#include <stdexcept>
#include <string>

namespace qdrf {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qdrf
