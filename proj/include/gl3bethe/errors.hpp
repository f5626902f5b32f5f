#pragma once

#include <stdexcept>
#include <string>

namespace gl3bethe {

// Base of every error raised by the library. Each subclass names one failure class.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A rational function was evaluated at one of its poles.
struct PoleError : Error {
    using Error::Error;
};

// A parameter collection violates the genericity rule.
struct GenericityError : Error {
    using Error::Error;
};

// Two Bethe parameters of the same colour coincide.
struct DegenerateError : Error {
    using Error::Error;
};

// An index or size is outside its admissible range.
struct RangeError : Error {
    using Error::Error;
};

// Parameter sets have the wrong cardinality for the requested operation.
struct CardinalityError : Error {
    using Error::Error;
};

// The composite product identity failed, or a split position is invalid.
struct SplitError : Error {
    using Error::Error;
};

// Seeded parameter drawing could not find a generic sample.
struct RetryExhausted : Error {
    using Error::Error;
};

// A job configuration could not be parsed or validated.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace gl3bethe
