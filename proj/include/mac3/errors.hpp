/// @file errors.hpp
/// @brief Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace mac3 {

/// Invalid user-facing configuration (bad scheme name, bad n, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: eigensolver non-convergence, singular
/// system, divergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mac3
