#pragma once

#include <stdexcept>
#include <string>

namespace beadstring {

/// Bad or inconsistent input data (config files, malformed targets).
/// CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation was violated (e.g. T* <= 2l,
/// incompatible target data). CLI maps this to exit code 2.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The numerics failed to converge or a tolerance could not be met.
/// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace beadstring
