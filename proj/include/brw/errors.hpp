#pragma once

#include <stdexcept>
#include <string>

namespace brw {

// Error taxonomy mirrors the CLI exit codes: configuration / domain errors
// exit with 2, numeric / resource errors with 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: unknown family, invalid parameters, malformed files.
struct ConfigError : Error {
    using Error::Error;
};

// A value outside an operation's domain (unknown vertex, reducible matrix,
// non-stochastic rows).
struct DomainError : Error {
    using Error::Error;
};

// Iteration caps exceeded, overflow guards tripped.
struct NumericError : Error {
    using Error::Error;
};

// Memory/work budget exceeded; message names the offending horizon or radius.
struct ResourceError : Error {
    using Error::Error;
};

} // namespace brw
