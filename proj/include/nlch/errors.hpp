#pragma once

#include <stdexcept>
#include <string>

namespace nlch {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A model assumption gate failed (positivity margin c0, noise trace condition,
// velocity admissibility). A run must not start after one of these.
struct AssumptionViolation : Error {
    using Error::Error;
};

// Malformed configuration, schema violation, or an out-of-contract argument.
struct ConfigError : Error {
    using Error::Error;
};

// File I/O and serialization format problems.
struct IoError : Error {
    using Error::Error;
};

// Raised by a single step when the state leaves the admissible range.
// simulate() converts this into a blow-up trajectory status.
struct BlowupSignal : Error {
    long step;
    BlowupSignal(long step_, const std::string& what_) : Error(what_), step(step_) {}
};

} // namespace nlch
