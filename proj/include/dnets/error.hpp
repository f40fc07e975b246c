#pragma once

#include <stdexcept>
#include <string>

namespace dnets {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, contract violations, malformed configuration.
struct ParameterError : Error {
    using Error::Error;
};

// An exhaustive enumeration would exceed its configured ceiling.
// Callers should fall back to a sampled check.
struct EnumerationLimitError : Error {
    using Error::Error;
};

// File or document parsing failures.
struct IoError : Error {
    using Error::Error;
};

}  // namespace dnets
