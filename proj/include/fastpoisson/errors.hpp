#pragma once

#include <stdexcept>
#include <string>

namespace fastpoisson {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unsupported grid, boundary-condition pattern or solver configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Array extents that do not match a plan, or out-of-bounds addressing.
class ExtentError : public Error {
public:
    using Error::Error;
};

/// Input data the solver refuses to process (NaN/Inf values).
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace fastpoisson
