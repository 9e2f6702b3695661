#pragma once

#include <stdexcept>
#include <string>

namespace rough {

// Invalid parameter values or malformed configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric routine could not proceed (factorization failure, ODE blow-up, ...).
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rough
