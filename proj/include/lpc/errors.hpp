#pragma once

#include <stdexcept>
#include <string>

namespace lpc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad constructor/operation arguments (zero denominator, beta out of range, ...).
struct ParameterError : Error {
    using Error::Error;
};

// Index or slice out of range.
struct BoundsError : Error {
    using Error::Error;
};

// The codec requires a strictly positive martingale and met capital zero.
struct PositivityError : Error {
    using Error::Error;
};

// A codeword did not decode to a unique payload (corrupted or foreign data).
struct InvalidCodewordError : Error {
    using Error::Error;
};

// Malformed self-delimiting stream or program.
struct DecodeError : Error {
    using Error::Error;
};

// Checkpoint candidates exhausted before a schedule could be selected.
struct ScheduleError : Error {
    using Error::Error;
};

// A read past the end of a finite source or encoded range.
struct RangeError : Error {
    using Error::Error;
};

// Transducer produces no output under the stationary weighting.
struct DegenerateOutputError : Error {
    using Error::Error;
};

// The uniform-input chain has more than one recurrent class.
struct AmbiguousChainError : Error {
    using Error::Error;
};

// File or JSON content that cannot be parsed.
struct ParseError : Error {
    using Error::Error;
};

} // namespace lpc
