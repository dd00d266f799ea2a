#pragma once

#include <stdexcept>

namespace sumrate {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix sizes.
struct DimensionError : Error {
  using Error::Error;
};

// Numeric input outside the documented domain (negative where nonnegative
// is required, nonpositive where strictly positive is required, ...).
struct DomainError : Error {
  using Error::Error;
};

// Bad solver/scenario configuration values.
struct InvalidConfigError : Error {
  using Error::Error;
};

// An iterative routine exhausted its budget before reaching tolerance.
struct NonConvergenceError : Error {
  using Error::Error;
};

// Matrix inversion hit a (numerically) singular matrix.
struct SingularError : Error {
  using Error::Error;
};

// A rate/SINR target violates the constraint beyond tolerance.
struct InfeasibleError : Error {
  using Error::Error;
};

// Channel statistics degenerate (zero empirical mean inner product).
struct DegenerateChannelError : Error {
  using Error::Error;
};

// A coupling/noise entry that must be strictly positive is not.
struct NonPositiveEntryError : Error {
  using Error::Error;
};

// Malformed problem/solution files.
struct SchemaError : Error {
  using Error::Error;
};

}  // namespace sumrate
