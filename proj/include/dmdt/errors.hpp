#pragma once

#include <stdexcept>
#include <string>

namespace dmdt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, dimensions, or configuration. CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Problems with input data files, parsing, or alignment. CLI exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-convergence, degenerate data, non-positive equity.
/// CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace dmdt
