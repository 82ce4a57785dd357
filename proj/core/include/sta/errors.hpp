#pragma once

#include <stdexcept>
#include <string>

namespace sta {

// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data or configuration (maps to CLI exit code 2).  Everything
// deriving from Error but not from ValidationError is a runtime failure
// (exit code 1).
struct ValidationError : Error {
    using Error::Error;
};

// Gaussian sum attains no positive value, so it cannot be normalized.
struct DegenerateParametrizationError : ValidationError {
    using ValidationError::ValidationError;
};

// Pulse tails at t=0 / t=T too large for the transfer guarantee.
struct BoundaryConditionError : ValidationError {
    using ValidationError::ValidationError;
};

// Omega_P^2 + Omega_S^2 below threshold somewhere: mixing angle undefined.
struct SingularMixingError : ValidationError {
    using ValidationError::ValidationError;
};

// Negative radicand beyond tolerance when solving for the physical pulses.
struct NonPhysicalFrameError : Error {
    using Error::Error;
};

// State norm left the unit sphere beyond tolerance during integration.
struct NormDriftError : Error {
    using Error::Error;
};

// The geometric phase term failed its vanishing assertion.
struct GeometricPhaseError : Error {
    using Error::Error;
};

}  // namespace sta
