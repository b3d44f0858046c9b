#pragma once

#include <stdexcept>

namespace sppde {

/// Base class for all library errors. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or unknown identifiers (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problem data or call arguments violating a documented precondition (exit code 2).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: degenerate pivots, incompatible meshes (exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures (exit code 4).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sppde
